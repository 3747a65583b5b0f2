#include <array>
#include <string>

#include "binio.hpp"
#include "rrc/artifact.hpp"

namespace rrc {

namespace {

constexpr std::array<std::string_view, 6> kAlgoNames{"bc", "crr", "awac", "cql", "iql", "td3bc"};
constexpr std::string_view kMagic = "RRCP";
constexpr std::uint32_t kMaxLayers = 64;
constexpr std::uint32_t kMaxWidth = 1u << 16;

void put_vec(binio::Writer& w, const Eigen::VectorXd& v) { w.put_array(v.data(), std::size_t(v.size())); }

Eigen::VectorXd get_vec(binio::Reader& r, int n) {
  Eigen::VectorXd v(n);
  r.get_array(v.data(), std::size_t(n));
  return v;
}

}  // namespace

std::string algo_name(Algo a) {
  const auto i = std::size_t(a);
  if (i >= kAlgoNames.size()) throw InputError("unknown algorithm id " + std::to_string(i));
  return std::string(kAlgoNames[i]);
}

Algo parse_algo(std::string_view s) {
  for (std::size_t i = 0; i < kAlgoNames.size(); ++i)
    if (kAlgoNames[i] == s) return Algo(i);
  throw InputError("unknown algorithm '" + std::string(s) + "' (expected bc|crr|awac|cql|iql|td3bc)");
}

void PolicyArtifact::validate() const {
  if (history < 1 || base_obs_dim < 1 || act_dim < 1) throw FormatError("policy: non-positive dimensions");
  const int in = input_dim();
  if (actor.dims().empty() || actor.input_dim() != in || actor.output_dim() != act_dim)
    throw FormatError("policy: network shape does not match the declared dimensions");
  if (norm.obs_dim() != in || norm.obs_std.size() != in || norm.act_dim() != act_dim ||
      norm.act_high.size() != act_dim)
    throw FormatError("policy: normalization statistics do not match the network input");
  if (head == HeadKind::Gaussian ? log_std.size() != act_dim : log_std.size() != 0)
    throw FormatError("policy: log_std does not match the head kind");
}

Eigen::VectorXd PolicyArtifact::act(const Eigen::Ref<const Eigen::VectorXd>& stacked_obs) const {
  if (stacked_obs.size() != input_dim()) throw InputError("policy input has the wrong dimension");
  const Eigen::MatrixXd z = norm.normalize(stacked_obs);
  return norm.clip_action(actor.forward(z).col(0));
}

bool operator==(const PolicyArtifact& a, const PolicyArtifact& b) {
  return serialize_policy(a) == serialize_policy(b);
}

std::string serialize_policy(const PolicyArtifact& p) {
  p.validate();
  binio::Writer w;
  w.put_bytes(kMagic);
  w.put<std::uint32_t>(PolicyArtifact::kVersion);
  w.put<std::uint8_t>(std::uint8_t(p.algo));
  w.put<std::uint8_t>(std::uint8_t(p.task));
  w.put<std::uint8_t>(std::uint8_t(p.head));
  w.put<std::uint32_t>(std::uint32_t(p.history));
  w.put<std::uint32_t>(std::uint32_t(p.base_obs_dim));
  w.put<std::uint32_t>(std::uint32_t(p.act_dim));
  w.put<std::uint64_t>(p.config_fingerprint);
  const auto& dims = p.actor.dims();
  w.put<std::uint32_t>(std::uint32_t(dims.size()));
  for (int d : dims) w.put<std::uint32_t>(std::uint32_t(d));
  put_vec(w, p.norm.obs_mean);
  put_vec(w, p.norm.obs_std);
  put_vec(w, p.norm.act_low);
  put_vec(w, p.norm.act_high);
  for (const auto& l : p.actor.layers()) {
    w.put_array(l.weight.data(), std::size_t(l.weight.size()));
    w.put_array(l.bias.data(), std::size_t(l.bias.size()));
  }
  if (p.head == HeadKind::Gaussian) put_vec(w, p.log_std);
  return w.take();
}

PolicyArtifact deserialize_policy(std::string_view bytes) {
  binio::Reader r(bytes);
  if (r.get_bytes(kMagic.size()) != kMagic) throw FormatError("not a policy file (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != PolicyArtifact::kVersion)
    throw FormatError("unsupported policy file version " + std::to_string(version));
  PolicyArtifact p;
  const auto algo = r.get<std::uint8_t>();
  const auto task = r.get<std::uint8_t>();
  const auto head = r.get<std::uint8_t>();
  if (algo >= kAlgoNames.size()) throw FormatError("policy: unknown algorithm id");
  if (task > 1) throw FormatError("policy: unknown task id");
  if (head > 1) throw FormatError("policy: unknown head kind");
  p.algo = Algo(algo);
  p.task = Task(task);
  p.head = HeadKind(head);
  const auto history = r.get<std::uint32_t>();
  const auto obs_dim = r.get<std::uint32_t>();
  const auto act_dim = r.get<std::uint32_t>();
  if (history < 1 || history > 64 || obs_dim < 1 || obs_dim > kMaxWidth || act_dim < 1 || act_dim > kMaxWidth)
    throw FormatError("policy: implausible dimensions");
  p.history = int(history);
  p.base_obs_dim = int(obs_dim);
  p.act_dim = int(act_dim);
  p.config_fingerprint = r.get<std::uint64_t>();
  const auto n_dims = r.get<std::uint32_t>();
  if (n_dims < 2 || n_dims > kMaxLayers) throw FormatError("policy: implausible layer count");
  std::vector<int> dims(n_dims);
  for (auto& d : dims) {
    const auto v = r.get<std::uint32_t>();
    if (v < 1 || v > kMaxWidth) throw FormatError("policy: implausible layer width");
    d = int(v);
  }
  const int in = p.input_dim();
  if (dims.front() != in || dims.back() != p.act_dim)
    throw FormatError("policy: layer dimensions disagree with the header");
  p.norm.obs_mean = get_vec(r, in);
  p.norm.obs_std = get_vec(r, in);
  p.norm.act_low = get_vec(r, p.act_dim);
  p.norm.act_high = get_vec(r, p.act_dim);
  p.actor = nn::Mlp::zeros(dims);
  for (auto& l : p.actor.layers()) {
    r.get_array(l.weight.data(), std::size_t(l.weight.size()));
    r.get_array(l.bias.data(), std::size_t(l.bias.size()));
  }
  if (p.head == HeadKind::Gaussian) p.log_std = get_vec(r, p.act_dim);
  if (r.remaining() != 0) throw FormatError("policy: trailing bytes after the parameter arrays");
  p.validate();
  return p;
}

void save_policy(const PolicyArtifact& p, const std::filesystem::path& path) {
  binio::write_file(path, serialize_policy(p));
}

PolicyArtifact load_policy(const std::filesystem::path& path) {
  return deserialize_policy(binio::read_file(path));
}

}  // namespace rrc
