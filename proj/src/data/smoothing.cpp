#include "rrc/data.hpp"

namespace rrc {

void PoseFilterConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("smoothing weight alpha must lie in (0, 1]");
  if (delay_threshold < 0) throw ParameterError("delay threshold must be non-negative");
}

PoseSmoother::PoseSmoother(PoseFilterConfig cfg) : cfg_(cfg) { cfg_.validate(); }

CubePose PoseSmoother::update(const PoseEstimate& e) {
  if (!started_) {
    out_ = {e.pose.position, canonical(e.pose.orientation)};
    started_ = true;
    return out_;
  }
  const bool valid = e.delay < cfg_.delay_threshold || e.confidence > cfg_.confidence_threshold;
  if (!valid) return out_;
  const double a = cfg_.alpha;
  out_.position = (1.0 - a) * out_.position + a * e.pose.position;
  Eigen::Vector4d prev = out_.orientation.coeffs();
  Eigen::Vector4d next = e.pose.orientation.normalized().coeffs();
  if (prev.dot(next) < 0.0) next = -next;
  const Eigen::Vector4d blend = (1.0 - a) * prev + a * next;
  Quat q;
  q.coeffs() = blend;
  out_.orientation = canonical(q);
  return out_;
}

std::vector<CubePose> smooth_pose_stream(const std::vector<PoseEstimate>& stream, const PoseFilterConfig& cfg) {
  if (stream.empty()) throw InputError("pose stream is empty");
  PoseSmoother s(cfg);
  std::vector<CubePose> out;
  out.reserve(stream.size());
  for (const auto& e : stream) out.push_back(s.update(e));
  return out;
}

namespace {

class SmoothedSession final : public PolicySession {
 public:
  SmoothedSession(std::unique_ptr<PolicySession> inner, Task task, const PoseFilterConfig& cfg)
      : inner_(std::move(inner)), task_(task), smoother_(cfg) {}

  Action act(const Eigen::VectorXd& observation) override {
    Observation obs = Observation::from_vector(task_, observation);
    obs.cube = smoother_.update({obs.cube, obs.confidence, obs.delay});
    return inner_->act(obs.to_vector());
  }

 private:
  std::unique_ptr<PolicySession> inner_;
  Task task_;
  PoseSmoother smoother_;
};

}  // namespace

SmoothedPolicy::SmoothedPolicy(std::shared_ptr<const Policy> inner, Task task, PoseFilterConfig cfg)
    : inner_(std::move(inner)), task_(task), cfg_(cfg) {
  if (!inner_) throw InputError("smoothed policy needs an inner policy");
  cfg_.validate();
}

std::unique_ptr<PolicySession> SmoothedPolicy::start(const EpisodeContext& ctx) const {
  return std::make_unique<SmoothedSession>(inner_->start(ctx), task_, cfg_);
}

}  // namespace rrc
