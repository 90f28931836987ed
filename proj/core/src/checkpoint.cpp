#include "taglm/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "taglm/errors.hpp"

namespace taglm {
namespace {

using nlohmann::json;

constexpr std::string_view kTrailerPrefix = "checksum fnv1a64 ";

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Shape {
  Eigen::Index rows, cols;
};

std::vector<Shape> shapes(const ModelParams& p) {
  std::vector<Shape> out;
  out.push_back({p.embedding.rows(), p.embedding.cols()});
  for (const auto& l : p.layers) {
    for (const Matrix* w : {&l.w_forget, &l.w_input, &l.w_candidate, &l.w_output}) out.push_back({w->rows(), w->cols()});
    for (const Vector* b : {&l.b_forget, &l.b_input, &l.b_candidate, &l.b_output}) out.push_back({b->size(), 1});
  }
  out.push_back({p.w_out.rows(), p.w_out.cols()});
  out.push_back({p.b_out.size(), 1});
  return out;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  ckpt.params.validate();
  const ModelDims dims = ckpt.params.dims();
  if (static_cast<std::size_t>(dims.vocab) != ckpt.vocab.size()) {
    throw DimensionMismatch("vocabulary size differs from model vocabulary dimension");
  }

  json config = json::object();
  for (const auto& [k, v] : train_config_to_key_values(ckpt.config)) config[k] = v;

  std::string body = "{\n";
  body += "  \"format\": \"taglm-checkpoint\",\n";
  body += "  \"format_version\": " + std::to_string(kCheckpointFormatVersion) + ",\n";
  body += "  \"dims\": " +
          json{{"vocab", dims.vocab}, {"embed", dims.embed}, {"hidden", dims.hidden}, {"layers", dims.layers},
               {"window", ckpt.config.window}}
              .dump() +
          ",\n";
  body += "  \"seed\": " + std::to_string(ckpt.config.seed) + ",\n";
  body += "  \"loss_penalty\": " + json(ckpt.config.loss_penalty).dump() + ",\n";
  body += "  \"vocabulary\": " + json(ckpt.vocab.chars()).dump() + ",\n";
  body += "  \"config\": " + config.dump() + ",\n";
  body += "  \"params\": [\n";
  const auto groups = param_groups(ckpt.params);
  const auto dims_of = shapes(ckpt.params);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    json entry{{"name", groups[g].name},
               {"rows", dims_of[g].rows},
               {"cols", dims_of[g].cols},
               {"values", std::vector<double>(groups[g].values.begin(), groups[g].values.end())}};
    body += "    " + entry.dump() + (g + 1 < groups.size() ? ",\n" : "\n");
  }
  body += "  ]\n}\n";
  return body + std::string(kTrailerPrefix) + hex64(fnv1a64(body)) + "\n";
}

Checkpoint parse_checkpoint(std::string_view text) {
  if (text.empty() || text.back() != '\n') throw ChecksumMismatch("checkpoint is truncated (no trailer line)");
  const auto line_start = text.rfind('\n', text.size() - 2);
  const std::size_t trailer_at = line_start == std::string_view::npos ? 0 : line_start + 1;
  const std::string_view trailer = text.substr(trailer_at, text.size() - 1 - trailer_at);
  if (trailer.substr(0, kTrailerPrefix.size()) != kTrailerPrefix) {
    throw ChecksumMismatch("checkpoint is truncated (missing checksum trailer)");
  }
  const std::string_view body = text.substr(0, trailer_at);
  if (trailer.substr(kTrailerPrefix.size()) != hex64(fnv1a64(body))) {
    throw ChecksumMismatch("checkpoint checksum does not match its contents");
  }

  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint body is not valid JSON: ") + e.what());
  }

  try {
    if (doc.value("format", std::string{}) != "taglm-checkpoint") throw IoError("not a taglm checkpoint");
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw FormatVersionMismatch("checkpoint format_version " + std::to_string(version) + ", expected " +
                                  std::to_string(kCheckpointFormatVersion));
    }

    Checkpoint ckpt;
    KeyValues kv;
    for (const auto& [k, v] : doc.at("config").items()) kv.emplace_back(k, v.get<std::string>());
    ckpt.config = train_config_from_key_values(kv);
    ckpt.vocab = Vocabulary(doc.at("vocabulary").get<std::string>());

    const auto& d = doc.at("dims");
    const ModelDims dims{d.at("vocab").get<int>(), d.at("embed").get<int>(), d.at("hidden").get<int>(),
                         d.at("layers").get<int>()};
    if (static_cast<std::size_t>(dims.vocab) != ckpt.vocab.size()) {
      throw DimensionMismatch("checkpoint vocabulary does not match its dims");
    }
    ckpt.params = ModelParams::zeros(dims);
    auto groups = param_groups(ckpt.params);
    const auto& arrays = doc.at("params");
    if (arrays.size() != groups.size()) throw DimensionMismatch("checkpoint has the wrong number of parameter arrays");
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& entry = arrays.at(g);
      if (entry.at("name").get<std::string>() != groups[g].name) {
        throw DimensionMismatch("unexpected parameter array '" + entry.at("name").get<std::string>() + "'");
      }
      const auto& values = entry.at("values");
      if (values.size() != groups[g].values.size()) {
        throw DimensionMismatch("parameter array '" + groups[g].name + "' has the wrong length");
      }
      for (std::size_t k = 0; k < values.size(); ++k) groups[g].values[k] = values[k].get<double>();
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  const std::string text = serialize_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str());
}

}  // namespace taglm
