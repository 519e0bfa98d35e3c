// Copyright (C) 2026 The mcaf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcaf/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "mcaf/error.hpp"

namespace mcaf {

namespace {

constexpr char kMagic[] = "MCAF1\n";

void put_le_float(std::ostream& out, float f) {
  uint32_t bits;
  std::memcpy(&bits, &f, sizeof(bits));
  const char bytes[4] = {
      static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
      static_cast<char>((bits >> 16) & 0xff),
      static_cast<char>((bits >> 24) & 0xff)};
  out.write(bytes, 4);
}

float get_le_float(const unsigned char* p) {
  const uint32_t bits = static_cast<uint32_t>(p[0]) |
                        (static_cast<uint32_t>(p[1]) << 8) |
                        (static_cast<uint32_t>(p[2]) << 16) |
                        (static_cast<uint32_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &bits, sizeof(f));
  return f;
}

nlohmann::ordered_json config_to_json(const Checkpoint& c) {
  const ModelConfig& mc = c.params.config;
  nlohmann::ordered_json j;
  j["d_embed"] = mc.d_embed;
  j["n_heads"] = mc.n_heads;
  j["conv_kernel_size"] = mc.conv_kernel_size;
  j["dropout_rate"] = mc.dropout_rate;
  j["max_contexts"] = mc.max_contexts;
  j["attention_scaling"] = mc.attention_scaling;
  j["seed"] = mc.seed;
  j["max_path_length"] = c.max_path_length;
  j["max_path_width"] = c.max_path_width;
  j["threshold"] = c.threshold;
  return j;
}

}  // namespace

void save_checkpoint(std::ostream& out, const Checkpoint& c) {
  nlohmann::ordered_json header;
  header["config"] = config_to_json(c);
  header["node_vocab"] = c.params.node_vocab();
  header["path_vocab"] = c.params.path_vocab();

  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  uint64_t offset = 0;
  c.params.for_each([&](const std::string& name, const Mat& m) {
    nlohmann::ordered_json e;
    e["name"] = name;
    e["rows"] = m.rows();
    e["cols"] = m.cols();
    e["offset"] = offset;
    names.push_back(e);
    offset += static_cast<uint64_t>(m.size()) * 4;
  });
  header["params"] = names;

  out.write(kMagic, 6);
  const std::string htext = header.dump();
  out.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  out.put('\n');
  c.params.for_each([&](const std::string&, const Mat& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        put_le_float(out, static_cast<float>(m(i, j)));
      }
    }
  });
  if (!out) {
    throw make_error(ErrorCode::IoError, "checkpoint write failed");
  }
}

void save_checkpoint_file(const std::string& path, const Checkpoint& c) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw make_error(ErrorCode::IoError,
                     "cannot open checkpoint for writing: " + path);
  }
  save_checkpoint(out, c);
}

Checkpoint load_checkpoint(std::istream& in) {
  char magic[6];
  in.read(magic, 6);
  if (!in || std::memcmp(magic, kMagic, 6) != 0) {
    throw make_error(ErrorCode::SchemaError,
                     "checkpoint: bad magic bytes");
  }
  std::string htext;
  if (!std::getline(in, htext)) {
    throw make_error(ErrorCode::SchemaError, "checkpoint: missing header");
  }

  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(htext);
  } catch (const nlohmann::json::exception& e) {
    throw make_error(ErrorCode::SchemaError,
                     std::string("checkpoint: header is not JSON: ") +
                         e.what());
  }

  Checkpoint c;
  try {
    const auto& jc = header.at("config");
    ModelConfig mc;
    mc.d_embed = jc.at("d_embed").get<int>();
    mc.n_heads = jc.at("n_heads").get<int>();
    mc.conv_kernel_size = jc.at("conv_kernel_size").get<int>();
    mc.dropout_rate = jc.at("dropout_rate").get<double>();
    mc.max_contexts = jc.at("max_contexts").get<int>();
    mc.attention_scaling = jc.at("attention_scaling").get<bool>();
    mc.seed = jc.at("seed").get<uint64_t>();
    c.max_path_length = jc.at("max_path_length").get<int>();
    c.max_path_width = jc.at("max_path_width").get<int>();
    c.threshold = jc.at("threshold").get<double>();

    const size_t node_vocab = header.at("node_vocab").get<size_t>();
    const size_t path_vocab = header.at("path_vocab").get<size_t>();
    c.params = init_params(mc, node_vocab, path_vocab);

    // Shape validation: the header's named list must match this config's
    // parameter set exactly, in order.
    const auto& names = header.at("params");
    size_t idx = 0;
    uint64_t expect_offset = 0;
    c.params.for_each([&](const std::string& name, Mat& m) {
      if (idx >= names.size()) {
        throw make_error(ErrorCode::SchemaError,
                         "checkpoint: header lists too few parameters");
      }
      const auto& e = names.at(idx);
      if (e.at("name").get<std::string>() != name ||
          e.at("rows").get<Eigen::Index>() != m.rows() ||
          e.at("cols").get<Eigen::Index>() != m.cols() ||
          e.at("offset").get<uint64_t>() != expect_offset) {
        throw make_error(ErrorCode::SchemaError,
                         "checkpoint: parameter '" + name +
                             "' does not match the configured shape");
      }
      expect_offset += static_cast<uint64_t>(m.size()) * 4;
      ++idx;
    });
    if (idx != names.size()) {
      throw make_error(ErrorCode::SchemaError,
                       "checkpoint: header lists extra parameters");
    }

    std::vector<unsigned char> blob(expect_offset);
    in.read(reinterpret_cast<char*>(blob.data()),
            static_cast<std::streamsize>(blob.size()));
    if (static_cast<uint64_t>(in.gcount()) != expect_offset) {
      throw make_error(ErrorCode::SchemaError,
                       "checkpoint: truncated parameter data");
    }

    const unsigned char* p = blob.data();
    c.params.for_each([&](const std::string&, Mat& m) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
          m(i, j) = static_cast<double>(get_le_float(p));
          p += 4;
        }
      }
    });
  } catch (const nlohmann::json::exception& e) {
    throw make_error(ErrorCode::SchemaError,
                     std::string("checkpoint: malformed header: ") + e.what());
  }
  return c;
}

Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw make_error(ErrorCode::IoError,
                     "cannot open checkpoint for reading: " + path);
  }
  return load_checkpoint(in);
}

}  // namespace mcaf
