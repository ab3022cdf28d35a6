#include "fgins/mechanization.hpp"

#include <stdexcept>

namespace fgins {

ImuSample zero_predecessor(const ImuSample& first) {
    return {first.t - first.dt, first.dt, Vec3::Zero(), Vec3::Zero()};
}

ImuSample compensate(const ImuSample& sample, const ImuBias& bias) {
    ImuSample out = sample;
    out.dtheta -= bias.bg * sample.dt;
    out.dvel -= bias.ba * sample.dt;
    return out;
}

Vec3 coning_rotvec(const ImuSample& prev, const ImuSample& curr) {
    return curr.dtheta + prev.dtheta.cross(curr.dtheta) / 12.0;
}

Vec3 sculled_dvel(const ImuSample& prev, const ImuSample& curr) {
    return curr.dvel + 0.5 * curr.dtheta.cross(curr.dvel) +
           (prev.dtheta.cross(curr.dvel) + prev.dvel.cross(curr.dtheta)) / 12.0;
}

Quaternion attitude_update(const NavState& state, const ImuSample& prev, const ImuSample& curr,
                           const LocalFrame& frame) {
    const Quaternion q_earth = quat_from_rotvec(-frame.earth_rate() * curr.dt);
    const Quaternion q_body = quat_from_rotvec(coning_rotvec(prev, curr));
    return (q_earth * state.q * q_body).normalized();
}

Vec3 velocity_update(const NavState& state, const ImuSample& prev, const ImuSample& curr,
                     const LocalFrame& frame) {
    const Mat3 c_earth = quat_to_dcm(quat_from_rotvec(-frame.earth_rate() * curr.dt));
    const Vec3 dv_f = 0.5 * (c_earth + Mat3::Identity()) * (quat_to_dcm(state.q) * sculled_dvel(prev, curr));
    const Vec3 dv_gcor = (frame.gravity() - 2.0 * frame.earth_rate().cross(state.v)) * curr.dt;
    return state.v + dv_f + dv_gcor;
}

Vec3 position_update(const NavState& state, const Vec3& v_new, double dt) {
    return state.p + 0.5 * (state.v + v_new) * dt;
}

NavState ins_step(const NavState& state, const ImuSample& prev, const ImuSample& curr, const ImuBias& bias,
                  const LocalFrame& frame) {
    const ImuSample p = compensate(prev, bias);
    const ImuSample c = compensate(curr, bias);
    NavState next;
    next.q = attitude_update(state, p, c, frame);
    next.v = velocity_update(state, p, c, frame);
    next.p = position_update(state, next.v, c.dt);
    return next;
}

std::pair<ImuSample, ImuSample> split_sample(const ImuSample& sample, double t_split) {
    const double t0 = sample.t - sample.dt;
    if (!(t_split > t0 && t_split < sample.t)) {
        throw std::invalid_argument("split_sample: split time outside the sample interval");
    }
    const double ratio = (t_split - t0) / sample.dt;
    ImuSample first{t_split, t_split - t0, ratio * sample.dtheta, ratio * sample.dvel};
    ImuSample second{sample.t, sample.t - t_split, sample.dtheta - first.dtheta, sample.dvel - first.dvel};
    return {first, second};
}

}  // namespace fgins
