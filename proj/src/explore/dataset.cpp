#include "smpred/explore/dataset.hpp"

#include <charconv>
#include <fstream>
#include <limits>

#include "smpred/common/error.hpp"
#include "smpred/common/version.hpp"
#include "smpred/io/container.hpp"

namespace smpred {

namespace {

// Shortest round-trip decimal form, deterministic across runs.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

struct ChannelRange {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  void update(double v) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
};

}  // namespace

std::string to_string(ExplorationKind kind) {
  switch (kind) {
    case ExplorationKind::kMtm:
      return "mtm";
    case ExplorationKind::kMm:
      return "mm";
    case ExplorationKind::kMmt:
      return "mmt";
  }
  throw ConfigError("unknown exploration kind");
}

ExplorationKind exploration_from_string(const std::string& name) {
  if (name == "mtm" || name == "MTM") return ExplorationKind::kMtm;
  if (name == "mm" || name == "MM") return ExplorationKind::kMm;
  if (name == "mmt" || name == "MMT") return ExplorationKind::kMmt;
  throw ConfigError("unknown exploration kind: " + name);
}

nlohmann::json Normalization::to_json() const {
  return {{"motor_scale", motor_scale},
          {"motor_offset", motor_offset},
          {"sensory_scale", sensory_scale},
          {"sensory_offset", sensory_offset}};
}

Normalization Normalization::from_json(const nlohmann::json& j) {
  Normalization n;
  n.motor_scale = j.at("motor_scale").get<std::vector<double>>();
  n.motor_offset = j.at("motor_offset").get<std::vector<double>>();
  n.sensory_scale = j.at("sensory_scale").get<std::vector<double>>();
  n.sensory_offset = j.at("sensory_offset").get<std::vector<double>>();
  return n;
}

nlohmann::json Provenance::to_json() const {
  return {{"setup", setup}, {"exploration", exploration}, {"seed", seed}, {"scene", scene}};
}

Provenance Provenance::from_json(const nlohmann::json& j) {
  Provenance p;
  p.setup = j.value("setup", "");
  p.exploration = j.value("exploration", "");
  p.seed = j.value("seed", std::uint64_t{0});
  p.scene = j.value("scene", nlohmann::json());
  return p;
}

Dataset::Dataset(std::size_t motor_dim, std::size_t sensory_dim)
    : motor_dim_(motor_dim), sensory_dim_(sensory_dim) {}

void Dataset::append(std::span<const double> m_t, std::span<const double> s_t,
                     std::span<const double> m_next, std::span<const double> s_next) {
  if (m_t.size() != motor_dim_ || m_next.size() != motor_dim_ || s_t.size() != sensory_dim_ ||
      s_next.size() != sensory_dim_)
    throw ShapeError("Dataset::append: transition dims do not match the dataset");
  m_t_.insert(m_t_.end(), m_t.begin(), m_t.end());
  s_t_.insert(s_t_.end(), s_t.begin(), s_t.end());
  m_next_.insert(m_next_.end(), m_next.begin(), m_next.end());
  s_next_.insert(s_next_.end(), s_next.begin(), s_next.end());
  ++n_;
}

void Dataset::normalize() {
  if (norm_) throw ConfigError("Dataset::normalize: already normalized");
  if (n_ == 0) throw DegenerateError("Dataset::normalize: empty dataset");

  std::vector<ChannelRange> motor(motor_dim_), sensory(sensory_dim_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t c = 0; c < motor_dim_; ++c) {
      motor[c].update(m_t_[i * motor_dim_ + c]);
      motor[c].update(m_next_[i * motor_dim_ + c]);
    }
    for (std::size_t c = 0; c < sensory_dim_; ++c) {
      sensory[c].update(s_t_[i * sensory_dim_ + c]);
      sensory[c].update(s_next_[i * sensory_dim_ + c]);
    }
  }

  Normalization norm;
  auto fit = [](const ChannelRange& r, const char* family, std::size_t ch, double& scale,
                double& offset) {
    if (r.max == r.min)
      throw DegenerateError("normalize: " + std::string(family) + " channel " +
                            std::to_string(ch) + " is constant (" + format_double(r.min) + ")");
    scale = 1.6 / (r.max - r.min);
    offset = -0.8 - scale * r.min;
  };
  norm.motor_scale.resize(motor_dim_);
  norm.motor_offset.resize(motor_dim_);
  for (std::size_t c = 0; c < motor_dim_; ++c)
    fit(motor[c], "motor", c, norm.motor_scale[c], norm.motor_offset[c]);
  norm.sensory_scale.resize(sensory_dim_);
  norm.sensory_offset.resize(sensory_dim_);
  for (std::size_t c = 0; c < sensory_dim_; ++c)
    fit(sensory[c], "sensory", c, norm.sensory_scale[c], norm.sensory_offset[c]);

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t c = 0; c < motor_dim_; ++c) {
      m_t_[i * motor_dim_ + c] = norm.apply_motor(c, m_t_[i * motor_dim_ + c]);
      m_next_[i * motor_dim_ + c] = norm.apply_motor(c, m_next_[i * motor_dim_ + c]);
    }
    for (std::size_t c = 0; c < sensory_dim_; ++c) {
      s_t_[i * sensory_dim_ + c] = norm.apply_sensory(c, s_t_[i * sensory_dim_ + c]);
      s_next_[i * sensory_dim_ + c] = norm.apply_sensory(c, s_next_[i * sensory_dim_ + c]);
    }
  }
  norm_ = std::move(norm);
}

const Normalization& Dataset::norm() const {
  if (!norm_) throw ConfigError("Dataset::norm: dataset is not normalized");
  return *norm_;
}

void Dataset::minibatch(Rng& rng, std::size_t size, Matrix& m_t, Matrix& s_t, Matrix& m_next,
                        Matrix& s_next) const {
  if (n_ == 0) throw DegenerateError("minibatch: empty dataset");
  if (m_t.rows() != size || m_t.cols() != motor_dim_) m_t = Matrix(size, motor_dim_);
  if (s_t.rows() != size || s_t.cols() != sensory_dim_) s_t = Matrix(size, sensory_dim_);
  if (m_next.rows() != size || m_next.cols() != motor_dim_) m_next = Matrix(size, motor_dim_);
  if (s_next.rows() != size || s_next.cols() != sensory_dim_) s_next = Matrix(size, sensory_dim_);
  for (std::size_t r = 0; r < size; ++r) {
    const std::size_t i = rng.uniform_index(n_);
    std::copy_n(m_t_.data() + i * motor_dim_, motor_dim_, m_t.row(r).data());
    std::copy_n(s_t_.data() + i * sensory_dim_, sensory_dim_, s_t.row(r).data());
    std::copy_n(m_next_.data() + i * motor_dim_, motor_dim_, m_next.row(r).data());
    std::copy_n(s_next_.data() + i * sensory_dim_, sensory_dim_, s_next.row(r).data());
  }
}

void Dataset::save(const std::filesystem::path& path) const {
  nlohmann::json header;
  header["schema"] = "smpred.dataset";
  header["version"] = kDatasetSchemaVersion;
  header["n"] = n_;
  header["motor_dim"] = motor_dim_;
  header["sensory_dim"] = sensory_dim_;
  header["provenance"] = provenance.to_json();
  header["norm"] = norm_ ? norm_->to_json() : nlohmann::json();

  std::vector<double> payload;
  payload.reserve(m_t_.size() + s_t_.size() + m_next_.size() + s_next_.size());
  for (const auto* block : {&m_t_, &s_t_, &m_next_, &s_next_})
    payload.insert(payload.end(), block->begin(), block->end());
  write_container(path, header, payload);
}

Dataset Dataset::load(const std::filesystem::path& path) {
  const Container c = read_container(path);
  if (c.header.value("schema", "") != "smpred.dataset")
    throw IoError("not a dataset file: " + path.string());
  const int version = c.header.value("version", -1);
  if (version != kDatasetSchemaVersion)
    throw IoError("unsupported dataset schema version " + std::to_string(version) +
                  " (expected " + std::to_string(kDatasetSchemaVersion) + ")");

  Dataset ds(c.header.at("motor_dim").get<std::size_t>(),
             c.header.at("sensory_dim").get<std::size_t>());
  ds.n_ = c.header.at("n").get<std::size_t>();
  ds.provenance = Provenance::from_json(c.header.at("provenance"));
  if (!c.header.at("norm").is_null()) ds.norm_ = Normalization::from_json(c.header.at("norm"));

  const std::size_t nm = ds.n_ * ds.motor_dim_;
  const std::size_t ns = ds.n_ * ds.sensory_dim_;
  if (c.payload.size() != 2 * (nm + ns))
    throw IoError("dataset payload size mismatch in " + path.string());
  auto it = c.payload.begin();
  ds.m_t_.assign(it, it + nm);
  it += nm;
  ds.s_t_.assign(it, it + ns);
  it += ns;
  ds.m_next_.assign(it, it + nm);
  it += nm;
  ds.s_next_.assign(it, it + ns);
  return ds;
}

void Dataset::export_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  auto channel_names = [&](const char* prefix, std::size_t dim, bool leading_comma) {
    for (std::size_t c = 0; c < dim; ++c) {
      if (leading_comma || c > 0) out << ',';
      out << prefix << c;
    }
  };
  channel_names("m_t_", motor_dim_, false);
  channel_names("s_t_", sensory_dim_, true);
  channel_names("m_next_", motor_dim_, true);
  channel_names("s_next_", sensory_dim_, true);
  out << '\n';
  for (std::size_t i = 0; i < n_; ++i) {
    bool first = true;
    for (auto block : {m_t(i), s_t(i), m_next(i), s_next(i)}) {
      for (double v : block) {
        if (!first) out << ',';
        out << format_double(v);
        first = false;
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

bool Dataset::operator==(const Dataset& other) const {
  return n_ == other.n_ && motor_dim_ == other.motor_dim_ &&
         sensory_dim_ == other.sensory_dim_ && m_t_ == other.m_t_ && s_t_ == other.s_t_ &&
         m_next_ == other.m_next_ && s_next_ == other.s_next_ &&
         provenance.to_json() == other.provenance.to_json() &&
         (norm_.has_value() == other.norm_.has_value()) &&
         (!norm_ || norm_->to_json() == other.norm_->to_json());
}

}  // namespace smpred
