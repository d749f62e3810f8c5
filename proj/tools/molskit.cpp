// molskit: verify, convert, search, bound, orbits.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "molskit/codes.hpp"
#include "molskit/dataset.hpp"
#include "molskit/diffmat.hpp"
#include "molskit/error.hpp"
#include "molskit/search.hpp"

using namespace molskit;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

struct Output {
  bool json_mode = false;
  bool quiet = false;

  void line(const std::string& text) const {
    if (!json_mode && !quiet) std::cout << text << '\n';
  }
};

json report_header(const std::string& command) {
  return {{"schema", "molskit-report"}, {"version", 1}, {"command", command}};
}

int finish(const Output& out, json report, int code) {
  report["exit_code"] = code;
  report["ok"] = code == kOk;
  if (out.json_mode) std::cout << report.dump(2) << '\n';
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << text;
}

json witness_json(const WitnessPair& w) {
  return {{"a", format_cycles(w.first)}, {"b", format_cycles(w.second)}, {"distance", w.distance}};
}

std::vector<std::size_t> sizes(const std::vector<std::vector<Permutation>>& sets) {
  std::vector<std::size_t> out;
  for (const auto& s : sets) out.push_back(s.size());
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& target, bool mols, const Output& out) {
  auto report = report_header("verify");
  report["input"] = target;
  const auto ds = load_dataset(target);
  report["n"] = ds.n;
  std::vector<std::string> failures;

  // Duplicated explicit words would be rejected by the code type; report them as a pair.
  for (std::size_t i = 0; i < ds.words.size(); ++i) {
    for (std::size_t j = i + 1; j < ds.words.size(); ++j) {
      if (ds.words[i].perm == ds.words[j].perm) {
        report["witness"] = witness_json({ds.words[i].perm, ds.words[j].perm, 0});
        report["error"] = "words " + ds.words[i].name + " and " + ds.words[j].name + " are equal";
        out.line("FAIL  " + report["error"].get<std::string>());
        return finish(out, report, kFailed);
      }
    }
  }

  std::optional<AssembledCode> assembled;
  try {
    assembled = assemble_code(ds);
  } catch (const ValidationError& e) {
    report["error"] = e.what();
    out.line(std::string("FAIL  ") + e.what());
    return finish(out, report, kFailed);
  }
  const auto& code = *assembled;
  const auto n = ds.n;
  report["code_size"] = code.code.size();
  out.line("dataset      " + ds.name + " (n = " + std::to_string(n) + ")");
  if (code.group) {
    report["group_order"] = *code.group->order();
    out.line("|U|          " + std::to_string(*code.group->order()));
  }
  json orbits = json::array();
  for (const auto& o : code.orbits) {
    orbits.push_back({{"name", o.name}, {"size", o.words.size()}});
    out.line("orbit        " + o.name + ": " + std::to_string(o.words.size()));
  }
  report["orbits"] = orbits;
  if (!code.base_split.empty()) {
    report["base_split"] = sizes(code.base_split);
    out.line("base split   " + join(sizes(code.base_split)));
  }
  if (code.diagonal_index) {
    report["diagonal_index"] = *code.diagonal_index;
    out.line("diag index   " + std::to_string(*code.diagonal_index));
  }
  out.line("|C|          " + std::to_string(code.code.size()));

  if (code.code.size() >= 2) {
    const auto pa = verify_pa(code.code.words(), n - 1);
    report["min_distance"] = pa.min_distance;
    out.line("min distance " + std::to_string(pa.min_distance));
    if (!pa.ok) {
      report["witness"] = witness_json(*pa.witness);
      failures.push_back("minimum distance " + std::to_string(pa.min_distance) + " below n-1 between " +
                         format_cycles(pa.witness->first) + " and " + format_cycles(pa.witness->second));
    }
    if (ds.expected.min_distance && *ds.expected.min_distance != pa.min_distance) {
      failures.push_back("min distance: expected " + std::to_string(*ds.expected.min_distance));
    }
  }

  std::optional<SeparabilityPartition> partition;
  if (failures.empty() && code.code.size() > 0) {
    try {
      partition = separability_partition(code.code.words());
      report["r"] = partition->r;
      report["m"] = partition->m;
      out.line("(r, m)       (" + std::to_string(partition->r) + ", " + std::to_string(partition->m) + ")");
      if (ds.expected.r && *ds.expected.r != partition->r) {
        failures.push_back("r: expected " + std::to_string(*ds.expected.r));
      }
      if (ds.expected.m && *ds.expected.m != partition->m) {
        failures.push_back("m: expected " + std::to_string(*ds.expected.m));
      }
    } catch (const ValidationError& e) {
      failures.push_back(std::string("separability: ") + e.what());
    }
  }

  if (mols && partition) {
    try {
      const auto squares = code_to_mols(*partition);
      report["mols"] = squares.size();
      out.line("MOLS         " + std::to_string(squares.size()) + " of order " + std::to_string(n));
    } catch (const ValidationError& e) {
      failures.push_back(std::string("MOLS: ") + e.what());
    }
  }

  report["failures"] = failures;
  for (const auto& f : failures) out.line("FAIL  " + f);
  if (failures.empty()) out.line("OK");
  return finish(out, report, failures.empty() ? kOk : kFailed);
}

// ---------------------------------------------------------------------------

PermutationCode verified_code(const PermutationCode& code) {
  if (code.size() >= 2) {
    const auto pa = verify_pa(code.words(), code.n() - 1);
    if (!pa.ok) {
      throw ValidationError("output code has distance " + std::to_string(pa.min_distance) + " between " +
                            format_cycles(pa.witness->first) + " and " + format_cycles(pa.witness->second));
    }
  }
  separability_partition(code.words());
  return code;
}

int cmd_convert(const std::string& direction, const std::string& in_path, const std::string& out_path,
                const std::string& group_spec, const std::string& format, const Output& out) {
  auto report = report_header("convert");
  report["direction"] = direction;
  report["input"] = in_path;
  std::string text;

  if (direction == "dm-to-code") {
    const auto dm = read_dm(read_file(in_path));
    const auto normalized = normalize_dm(dm);
    const auto code = verified_code(dm_to_code(normalized.matrix));
    report["code_size"] = code.size();
    report["n"] = code.n();
    text = write_code_file(code, "Code of the difference matrix in " + in_path);
  } else if (direction == "code-to-dm") {
    if (group_spec.empty()) throw ParseError("code-to-dm needs --group");
    const auto group = parse_group_spec(group_spec);
    const auto code = assemble_code(load_dataset(in_path)).code;
    const auto dm = code_to_dm(code, group);
    if (!verify_dm(dm).ok) throw ValidationError("code-to-dm: output does not verify");
    report["rows"] = dm.row_count();
    report["group"] = group.spec();
    text = write_dm(dm);
  } else if (direction == "code-to-mols") {
    const auto code = assemble_code(load_dataset(in_path)).code;
    const auto mols = code_to_mols(separability_partition(code.words()));
    report["squares"] = mols.size();
    report["order"] = mols.order();
    const bool as_json = format == "json" || (format.empty() && out_path.ends_with(".json"));
    text = as_json ? mols_to_json(mols) : mols_to_text(mols);
  } else if (direction == "mols-to-code") {
    const auto raw = read_file(in_path);
    const auto first = raw.find_first_not_of(" \t\r\n");
    const auto mols = first != std::string::npos && raw[first] == '[' ? mols_from_json(raw) : mols_from_text(raw);
    const auto code = verified_code(mols_to_code(mols));
    report["code_size"] = code.size();
    report["n"] = code.n();
    text = write_code_file(code, "Rows of " + std::to_string(mols.size()) + " MOLS from " + in_path);
  } else {
    throw ParseError("unknown direction '" + direction + "'");
  }

  if (out_path.empty() || out_path == "-") {
    if (!out.json_mode) std::cout << text;
  } else {
    write_file(out_path, text);
    report["output"] = out_path;
    out.line("wrote " + out_path);
  }
  return finish(out, report, kOk);
}

// ---------------------------------------------------------------------------

std::vector<Permutation> parse_list(const json& doc, const char* key, std::size_t degree) {
  std::vector<Permutation> out;
  if (!doc.contains(key)) return out;
  for (const auto& s : doc.at(key)) out.push_back(parse_cycles(s.get<std::string>(), degree));
  return out;
}

int cmd_search(const std::string& config_path, bool resume, std::optional<std::size_t> workers,
               const Output& out) {
  auto report = report_header("search");
  report["config"] = config_path;
  json doc;
  try {
    doc = json::parse(read_file(config_path));
  } catch (const json::exception& e) {
    throw ParseError(config_path + ": " + e.what());
  }

  try {
    std::size_t n = 0;
    std::vector<IsoElement> gens;
    std::vector<Permutation> seeds;
    if (doc.contains("dataset")) {
      const auto ds = load_dataset(doc.at("dataset").get<std::string>());
      n = ds.n;
      for (const auto& b : ds.base) gens.push_back(diagonal(b.perm));
      for (const auto& g : ds.generators) gens.push_back(IsoElement(g.perm));
      if (doc.value("dataset_seeds", true)) {
        for (const auto& r : ds.representatives) seeds.push_back(r.perm);
        if (ds.include_base) {
          std::vector<Permutation> base_gens;
          for (const auto& b : ds.base) base_gens.push_back(b.perm);
          for (auto& p : generate_closure(base_gens)) seeds.push_back(std::move(p));
        }
        for (const auto& w : ds.words) seeds.push_back(w.perm);
      }
    }
    if (doc.contains("n")) {
      const auto given = doc.at("n").get<std::size_t>();
      if (n != 0 && given != n) throw ParseError("config n disagrees with the dataset");
      n = given;
    }
    if (n < 2) throw ParseError("config needs n or dataset");
    for (auto& g : parse_list(doc, "generators", 2 * n)) gens.push_back(IsoElement(std::move(g)));
    if (gens.empty()) gens.push_back(IsoElement::identity(n));
    for (auto& s : parse_list(doc, "seeds", n)) seeds.push_back(std::move(s));

    SearchConfig config{generate_group(gens), {}, std::nullopt, seeds};
    for (auto& s : parse_list(doc, "required_stabilizer", 2 * n)) config.required_stabilizer.emplace_back(std::move(s));
    if (doc.contains("target_m")) config.target_m = doc.at("target_m").get<std::size_t>();
    config.node_limit = doc.value("node_limit", config.node_limit);
    config.workers = workers.value_or(doc.value("workers", std::size_t{1}));
    config.checkpoint_interval = std::max<std::size_t>(1, doc.value("checkpoint_interval", config.checkpoint_interval));
    if (doc.contains("checkpoint")) config.checkpoint = doc.at("checkpoint").get<std::string>();
    if (resume && !config.checkpoint) throw ParseError("--resume needs a checkpoint path in the config");
    if (config.checkpoint && !resume) std::filesystem::remove(*config.checkpoint);

    const auto enumeration = enumerate_orbits(config);
    json cand = json::array();
    for (const auto& c : enumeration.candidates) cand.push_back(c.words.size());
    report["candidates"] = cand;
    report["enumeration_complete"] = enumeration.complete;
    out.line("candidates   " + std::to_string(enumeration.candidates.size()));
    if (enumeration.candidates.empty()) {
      report["m_found"] = 0;
      report["words"] = 0;
      report["node_count"] = enumeration.nodes;
      report["complete"] = enumeration.complete;
      out.line("no admissible orbits");
      return finish(out, report, kOk);
    }

    const auto result = backtrack_join(enumeration.candidates, config);
    report["m_found"] = result.m;
    report["words"] = result.code.size();
    report["node_count"] = result.nodes;
    report["complete"] = result.complete && enumeration.complete;
    report["chosen"] = result.chosen;
    out.line("m found      " + std::to_string(result.m));
    out.line("words        " + std::to_string(result.code.size()));
    out.line("nodes        " + std::to_string(result.nodes));
    out.line(std::string("complete     ") + (report["complete"].get<bool>() ? "yes" : "no"));
    if (doc.contains("output") && result.m > 0) {
      const auto path = doc.at("output").get<std::string>();
      write_file(path, write_code_file(result.code, "Separable code found by search, m = " + std::to_string(result.m)));
      report["output"] = path;
      out.line("wrote " + path);
    }
    return finish(out, report, kOk);
  } catch (const json::exception& e) {
    throw ParseError(config_path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

int cmd_bound(long long n, const Output& out) {
  auto report = report_header("bound");
  report["n"] = n;
  if (n < 2) throw ParseError("bound needs n >= 2");
  const auto b = macneish_bound(static_cast<std::size_t>(n));
  report["bound"] = b;
  if (!out.json_mode) std::cout << b << '\n';
  return finish(out, report, kOk);
}

int cmd_orbits(const std::string& target, const Output& out) {
  auto report = report_header("orbits");
  report["input"] = target;
  const auto ds = load_dataset(target);
  const auto code = assemble_code(ds);
  if (!code.group) throw ParseError(target + " has no generators");
  const auto order = *code.group->order();
  report["group_order"] = order;
  out.line("|U| = " + std::to_string(order));
  json rows = json::array();
  auto emit = [&](const std::string& name, const std::vector<Permutation>& words) {
    const auto stab = order / words.size();
    rows.push_back({{"name", name},
                    {"representative", format_cycles(words.front())},
                    {"size", words.size()},
                    {"stabilizer_order", stab}});
    out.line(name + "\t" + std::to_string(words.size()) + "\tstabilizer " + std::to_string(stab));
  };
  for (const auto& o : code.orbits) emit(o.name, o.words);
  for (std::size_t i = 0; i < code.base_split.size(); ++i) emit("base." + std::to_string(i + 1), code.base_split[i]);
  report["orbits"] = rows;
  return finish(out, report, kOk);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isometry-invariant permutation codes, difference matrices and MOLS"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json", out.json_mode, "Print a JSON report");
  app.add_flag("--quiet", out.quiet, "Suppress the human-readable report");

  std::string target, direction, in_path, out_path, group_spec, format, config_path;
  bool mols = false, resume = false;
  std::optional<std::size_t> workers;
  long long bound_n = 0;

  auto* verify = app.add_subcommand("verify", "Assemble and verify a dataset or code file");
  verify->add_option("dataset", target, "Shipped dataset name or file path")->required();
  verify->add_flag("--mols", mols, "Also build and check the Latin squares");

  auto* convert = app.add_subcommand("convert", "Convert between difference matrices, codes and MOLS");
  convert->add_option("direction", direction, "dm-to-code | code-to-dm | code-to-mols | mols-to-code")
      ->required()
      ->check(CLI::IsMember({"dm-to-code", "code-to-dm", "code-to-mols", "mols-to-code"}));
  convert->add_option("input", in_path, "Input file or dataset")->required();
  convert->add_option("-o,--output", out_path, "Output file (stdout if omitted)");
  convert->add_option("--group", group_spec, "Group such as Z14 or Z3xZ21");
  convert->add_option("--format", format, "MOLS output format")->check(CLI::IsMember({"text", "json"}));

  auto* search = app.add_subcommand("search", "Enumerate candidate orbits and join them");
  search->add_option("config", config_path, "JSON search configuration")->required();
  search->add_flag("--resume", resume, "Continue from the checkpoint file");
  search->add_option("--workers", workers, "Parallel branch workers")->check(CLI::PositiveNumber);

  auto* bound = app.add_subcommand("bound", "MacNeish lower bound for N(n)");
  bound->add_option("n", bound_n, "Order")->required();

  auto* orbits = app.add_subcommand("orbits", "Orbit table of a dataset");
  orbits->add_option("dataset", target, "Shipped dataset name or file path")->required();

  for (auto* sub : {verify, convert, search, bound, orbits}) {
    sub->add_flag("--json", out.json_mode, "Print a JSON report");
    sub->add_flag("--quiet", out.quiet, "Suppress the human-readable report");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*verify) return cmd_verify(target, mols, out);
    if (*convert) return cmd_convert(direction, in_path, out_path, group_spec, format, out);
    if (*search) return cmd_search(config_path, resume, workers, out);
    if (*bound) return cmd_bound(bound_n, out);
    if (*orbits) return cmd_orbits(target, out);
  } catch (const ValidationError& e) {
    std::cerr << "molskit: " << e.what() << '\n';
    auto report = report_header(app.get_subcommands().front()->get_name());
    report["error"] = e.what();
    return finish(out, report, kFailed);
  } catch (const Error& e) {
    std::cerr << "molskit: " << e.what() << '\n';
    auto report = report_header(app.get_subcommands().front()->get_name());
    report["error"] = e.what();
    return finish(out, report, kInputError);
  }
  return kInputError;
}
