#include "raildelay/ml/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace raildelay::ml {

namespace {

constexpr std::array<char, 8> kMagic{'R', 'D', 'L', 'Y', 'M', 'O', 'D', 'L'};
constexpr std::array<char, 4> kEnd{'E', 'N', 'D', '.'};
constexpr std::uint8_t kNone = 255;

template <typename UInt>
void put(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> buf{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i)
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(buf.data(), buf.size());
}

void put_f64(std::ostream& out, double v) { put(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
  explicit Reader(std::istream& in) : in_(in) {}

  template <typename UInt>
  UInt get() {
    std::array<char, sizeof(UInt)> buf{};
    raw(buf.data(), buf.size());
    UInt v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i)
      v |= static_cast<UInt>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
  }
  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }

  void raw(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw ModelFormatError("model stream is truncated");
  }

private:
  std::istream& in_;
};

} // namespace

void save_model(std::ostream& out, const TrainedModel& model) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kModelFormatVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(model.kind));
  put<std::uint8_t>(out, model.preset ? static_cast<std::uint8_t>(*model.preset) : kNone);
  put<std::uint8_t>(out, model.metadata.delay_kind
                             ? static_cast<std::uint8_t>(*model.metadata.delay_kind)
                             : kNone);
  put<std::uint8_t>(out, 0);
  put<std::uint64_t>(out, model.metadata.seed);
  put<std::uint64_t>(out, model.metadata.rows);
  put_f64(out, model.init);
  put_f64(out, model.learning_rate);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.columns.size()));
  for (const auto& c : model.columns) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(c.size()));
    out.write(c.data(), static_cast<std::streamsize>(c.size()));
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.trees.size()));
  for (const auto& tree : model.trees) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(tree.nodes().size()));
    for (const auto& n : tree.nodes()) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(n.feature));
      put<std::uint32_t>(out, n.left);
      put<std::uint32_t>(out, n.right);
      put_f64(out, n.threshold);
      put_f64(out, n.value);
    }
  }
  out.write(kEnd.data(), kEnd.size());
}

TrainedModel load_model(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  r.raw(magic.data(), magic.size());
  if (magic != kMagic) throw ModelFormatError("not a raildelay model (bad magic bytes)");
  const auto version = r.get<std::uint32_t>();
  if (version != kModelFormatVersion)
    throw ModelFormatError("unsupported model format version " + std::to_string(version));

  TrainedModel m;
  const auto kind = r.get<std::uint8_t>();
  if (kind > 1) throw ModelFormatError("unknown ensemble kind");
  m.kind = static_cast<EnsembleKind>(kind);
  const auto preset = r.get<std::uint8_t>();
  if (preset != kNone) {
    if (preset >= kAllPresets.size()) throw ModelFormatError("unknown preset tag");
    m.preset = static_cast<ModelPreset>(preset);
  }
  const auto delay = r.get<std::uint8_t>();
  if (delay != kNone) {
    if (delay >= kDelayKindCount) throw ModelFormatError("unknown delay kind tag");
    m.metadata.delay_kind = static_cast<DelayKind>(delay);
  }
  r.get<std::uint8_t>();
  m.metadata.seed = r.get<std::uint64_t>();
  m.metadata.rows = r.get<std::uint64_t>();
  m.init = r.get_f64();
  m.learning_rate = r.get_f64();

  const auto n_columns = r.get<std::uint32_t>();
  if (n_columns > 4096) throw ModelFormatError("implausible column count");
  for (std::uint32_t i = 0; i < n_columns; ++i) {
    const auto len = r.get<std::uint32_t>();
    if (len > 4096) throw ModelFormatError("implausible column name length");
    std::string name(len, '\0');
    r.raw(name.data(), len);
    m.columns.push_back(std::move(name));
  }
  const auto n_trees = r.get<std::uint32_t>();
  if (n_trees == 0) throw ModelFormatError("model has no trees");
  for (std::uint32_t t = 0; t < n_trees; ++t) {
    const auto n_nodes = r.get<std::uint32_t>();
    if (n_nodes == 0 || n_nodes > (1u << 26)) throw ModelFormatError("implausible node count");
    std::vector<TreeNode> nodes(n_nodes);
    for (auto& n : nodes) {
      n.feature = static_cast<std::int32_t>(r.get<std::uint32_t>());
      n.left = r.get<std::uint32_t>();
      n.right = r.get<std::uint32_t>();
      n.threshold = r.get_f64();
      n.value = r.get_f64();
      if (n.feature >= static_cast<std::int32_t>(n_columns))
        throw ModelFormatError("split feature outside the column list");
    }
    try {
      m.trees.emplace_back(std::move(nodes));
    } catch (const std::invalid_argument& e) {
      throw ModelFormatError(std::string("corrupt tree: ") + e.what());
    }
  }
  std::array<char, 4> end{};
  r.raw(end.data(), end.size());
  if (end != kEnd) throw ModelFormatError("missing end marker");
  return m;
}

std::string save_model(const TrainedModel& model) {
  std::ostringstream out(std::ios::binary);
  save_model(out, model);
  return out.str();
}

TrainedModel load_model(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return load_model(in);
}

void save_model_file(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  save_model(out, model);
}

TrainedModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model " + path.string());
  try {
    return load_model(in);
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path.string() + ": " + e.what());
  }
}

} // namespace raildelay::ml
