#include "usim/click/model_io.hpp"

#include "json.hpp"
#include "usim/common/error.hpp"
#include "usim/common/jsonl.hpp"

namespace usim::click {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kFormatVersion = 1;

void write_pair_rows(std::ostream& out, const char* type, const PairTable& pairs,
                     const std::vector<double>& values) {
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    const auto& [query, doc] = pairs.key(static_cast<int>(s));
    out << ordered_json{{"type", type}, {"query", query}, {"doc", doc}, {"value", values[s]}}
               .dump()
        << "\n";
  }
}

}  // namespace

void write_params(std::ostream& out, const ClickModelParams& params) {
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        ordered_json header{{"format_version", kFormatVersion}, {"model", model_name(params)}};
        if constexpr (std::is_same_v<T, PbmParams>) {
          header["alpha_default"] = model.alpha_default;
          out << header.dump() << "\n";
          for (std::size_t r = 0; r < model.gamma.size(); ++r) {
            out << ordered_json{{"type", "gamma"},
                                {"rank", static_cast<int>(r) + 1},
                                {"value", model.gamma[r]}}
                       .dump()
                << "\n";
          }
          write_pair_rows(out, "alpha", model.pairs, model.alpha);
        } else if constexpr (std::is_same_v<T, UbmParams>) {
          header["alpha_default"] = model.alpha_default;
          out << header.dump() << "\n";
          for (std::size_t r = 0; r < model.gamma.size(); ++r) {
            for (std::size_t rp = 0; rp < model.gamma[r].size(); ++rp) {
              out << ordered_json{{"type", "gamma"},
                                  {"rank", static_cast<int>(r) + 1},
                                  {"prev_click", static_cast<int>(rp)},
                                  {"value", model.gamma[r][rp]}}
                         .dump()
                  << "\n";
            }
          }
          write_pair_rows(out, "alpha", model.pairs, model.alpha);
        } else if constexpr (std::is_same_v<T, DcmParams>) {
          header["alpha_default"] = model.alpha_default;
          header["lambda_default"] = model.lambda_default;
          out << header.dump() << "\n";
          for (std::size_t r = 0; r < model.lambda.size(); ++r) {
            out << ordered_json{{"type", "lambda"},
                                {"rank", static_cast<int>(r) + 1},
                                {"value", model.lambda[r]}}
                       .dump()
                << "\n";
          }
          write_pair_rows(out, "alpha", model.pairs, model.alpha);
        } else {
          header["gamma_continue"] = model.gamma_continue;
          header["attract_default"] = model.attract_default;
          header["satisfy_default"] = model.satisfy_default;
          out << header.dump() << "\n";
          write_pair_rows(out, "attract", model.pairs, model.attract);
          write_pair_rows(out, "satisfy", model.pairs, model.satisfy);
        }
      },
      params);
}

ClickModelParams read_params(std::istream& in) {
  ClickModelParams params;
  bool have_header = false;

  for_each_jsonl(in, [&](const json& record, std::size_t line) {
    if (!have_header) {
      if (!record.contains("model")) throw ParseError("missing model header", line);
      if (record.value("format_version", 0) != kFormatVersion) {
        throw ParseError("unsupported format_version", line);
      }
      const std::string name = record["model"].get<std::string>();
      if (name == "pbm") {
        PbmParams p;
        p.alpha_default = record.value("alpha_default", 0.5);
        params = std::move(p);
      } else if (name == "ubm") {
        UbmParams p;
        p.alpha_default = record.value("alpha_default", 0.5);
        params = std::move(p);
      } else if (name == "dcm") {
        DcmParams p;
        p.alpha_default = record.value("alpha_default", 0.5);
        p.lambda_default = record.value("lambda_default", 0.5);
        params = std::move(p);
      } else if (name == "dbn") {
        DbnParams p;
        p.gamma_continue = record.value("gamma_continue", 1.0);
        p.attract_default = record.value("attract_default", 0.5);
        p.satisfy_default = record.value("satisfy_default", 0.5);
        params = std::move(p);
      } else {
        throw ParseError("unknown model: " + name, line);
      }
      have_header = true;
      return;
    }

    const std::string type = record.value("type", std::string{});
    const double value = record.value("value", 0.0);
    std::visit(
        [&](auto& model) {
          using T = std::decay_t<decltype(model)>;
          if (type == "gamma") {
            const int rank = record.value("rank", 0);
            if (rank < 1) throw ParseError("gamma rank must be >= 1", line);
            if constexpr (std::is_same_v<T, PbmParams>) {
              if (static_cast<std::size_t>(rank) > model.gamma.size()) {
                model.gamma.resize(static_cast<std::size_t>(rank), 0.5);
              }
              model.gamma[static_cast<std::size_t>(rank - 1)] = value;
            } else if constexpr (std::is_same_v<T, UbmParams>) {
              const int prev = record.value("prev_click", 0);
              if (static_cast<std::size_t>(rank) > model.gamma.size()) {
                model.gamma.resize(static_cast<std::size_t>(rank));
              }
              auto& row = model.gamma[static_cast<std::size_t>(rank - 1)];
              if (row.size() < static_cast<std::size_t>(rank)) row.assign(static_cast<std::size_t>(rank), 0.5);
              if (prev < 0 || prev >= rank) throw ParseError("prev_click out of range", line);
              row[static_cast<std::size_t>(prev)] = value;
            } else {
              throw ParseError("gamma row not valid for this model", line);
            }
          } else if (type == "lambda") {
            if constexpr (std::is_same_v<T, DcmParams>) {
              const int rank = record.value("rank", 0);
              if (rank < 1) throw ParseError("lambda rank must be >= 1", line);
              if (static_cast<std::size_t>(rank) > model.lambda.size()) {
                model.lambda.resize(static_cast<std::size_t>(rank), model.lambda_default);
              }
              model.lambda[static_cast<std::size_t>(rank - 1)] = value;
            } else {
              throw ParseError("lambda row not valid for this model", line);
            }
          } else if (type == "alpha" || type == "attract" || type == "satisfy") {
            const std::string query = record.value("query", std::string{});
            const std::string doc = record.value("doc", std::string{});
            const int slot = model.pairs.intern(query, doc);
            if constexpr (std::is_same_v<T, DbnParams>) {
              auto& table = (type == "satisfy") ? model.satisfy : model.attract;
              auto& other = (type == "satisfy") ? model.attract : model.satisfy;
              if (static_cast<std::size_t>(slot) >= table.size()) {
                table.resize(static_cast<std::size_t>(slot) + 1, 0.5);
              }
              if (static_cast<std::size_t>(slot) >= other.size()) {
                other.resize(static_cast<std::size_t>(slot) + 1, 0.5);
              }
              table[static_cast<std::size_t>(slot)] = value;
            } else {
              if (type != "alpha") throw ParseError("unexpected row type: " + type, line);
              if (static_cast<std::size_t>(slot) >= model.alpha.size()) {
                model.alpha.resize(static_cast<std::size_t>(slot) + 1, model.alpha_default);
              }
              model.alpha[static_cast<std::size_t>(slot)] = value;
            }
          } else {
            throw ParseError("unknown row type: " + type, line);
          }
        },
        params);
  });

  if (!have_header) throw Error("empty click-model parameter file");
  return params;
}

}  // namespace usim::click
