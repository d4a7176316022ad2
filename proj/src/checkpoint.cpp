#include "nac/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nac/errors.hpp"
#include "nac/mlp_q.hpp"
#include "nac/tabular_q.hpp"

namespace nac {
namespace {

constexpr std::string_view kMagic = "NACQ1";

std::map<std::string, std::string> parse_fields(std::istringstream& in) {
  std::map<std::string, std::string> fields;
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw FormatError("checkpoint descriptor token without '=': " + token);
    fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return fields;
}

std::size_t to_size(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw FormatError(std::string("checkpoint descriptor: bad ") + what + " '" + s + "'");
  }
}

const std::string& field(const std::map<std::string, std::string>& f, const std::string& key) {
  auto it = f.find(key);
  if (it == f.end()) throw FormatError("checkpoint descriptor missing '" + key + "'");
  return it->second;
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

std::unique_ptr<QModel> model_from_descriptor(const std::string& descriptor) {
  std::istringstream in(descriptor);
  std::string kind;
  in >> kind;
  const auto f = parse_fields(in);
  if (kind == "tabular") {
    return std::make_unique<TabularQ>(to_size(field(f, "states"), "states"),
                                      to_size(field(f, "actions"), "actions"));
  }
  if (kind == "mlp") {
    std::vector<std::size_t> widths;
    std::stringstream ws(field(f, "widths"));
    std::string item;
    while (std::getline(ws, item, ',')) widths.push_back(to_size(item, "layer width"));
    if (widths.size() < 2) throw FormatError("checkpoint descriptor: need at least two widths");
    MlpShape shape;
    shape.input = widths.front();
    shape.output = widths.back();
    shape.hidden.assign(widths.begin() + 1, widths.end() - 1);
    const std::string& act = field(f, "activation");
    if (act == "relu") {
      shape.activation = Activation::relu;
    } else if (act == "tanh") {
      shape.activation = Activation::tanh;
    } else {
      throw FormatError("checkpoint descriptor: unknown activation '" + act + "'");
    }
    shape.frame_stack = to_size(field(f, "frame_stack"), "frame_stack");
    return std::make_unique<MlpQ>(shape);
  }
  throw FormatError("checkpoint descriptor: unknown model kind '" + kind + "'");
}

void write_checkpoint(const QModel& model, std::ostream& out) {
  out << kMagic << '\n' << model.descriptor() << '\n';
  for (double v : model.params()) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
  if (!out) throw std::runtime_error("failed to write checkpoint");
}

void save_checkpoint(const QModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
  write_checkpoint(model, out);
}

std::unique_ptr<QModel> read_checkpoint(std::istream& in) {
  std::string magic;
  std::string descriptor;
  if (!std::getline(in, magic) || magic != kMagic) throw FormatError("not a checkpoint: bad magic");
  if (!std::getline(in, descriptor)) throw FormatError("checkpoint truncated in header");
  auto model = model_from_descriptor(descriptor);
  for (double& v : model->params()) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw FormatError("checkpoint truncated in parameter block");
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes, 8);
    v = std::bit_cast<double>(to_little_endian(bits));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("checkpoint has trailing bytes after the parameter block");
  }
  return model;
}

std::unique_ptr<QModel> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path.string());
  return read_checkpoint(in);
}

}  // namespace nac
