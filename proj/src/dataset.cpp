#include "molskit/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "molskit/error.hpp"

#ifndef MOLSKIT_DEFAULT_DATA_DIR
#define MOLSKIT_DEFAULT_DATA_DIR "data"
#endif

namespace molskit {

namespace {

const std::vector<std::string> kShipped{"n14", "n20", "n21", "n35", "n48", "n56", "n63", "n96"};

struct Statement {
  std::size_t line = 0;
  std::string text;
};

std::vector<Statement> split_statements(std::string_view text) {
  std::vector<Statement> out;
  Statement cur;
  std::size_t line = 1;
  bool in_comment = false;
  for (char ch : text) {
    if (ch == '\n') {
      ++line;
      in_comment = false;
      cur.text += ' ';
      continue;
    }
    if (in_comment) continue;
    if (ch == '#') {
      in_comment = true;
      continue;
    }
    if (ch == ';') {
      if (cur.text.find_first_not_of(" \t\r") == std::string::npos) {
        throw ParseError("line " + std::to_string(line) + ": empty statement");
      }
      out.push_back(std::move(cur));
      cur = {};
      continue;
    }
    if (cur.line == 0 && !std::isspace(static_cast<unsigned char>(ch))) cur.line = line;
    cur.text += ch;
  }
  if (cur.text.find_first_not_of(" \t\r") != std::string::npos) {
    throw ParseError("line " + std::to_string(cur.line) + ": statement not terminated by ';'");
  }
  return out;
}

std::vector<std::string> words_of(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::size_t to_count(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != tok.size() || tok.front() == '-') {
    throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + tok + "'");
  }
  return v;
}

/// "2*17" expands to seventeen 2s.
std::vector<std::size_t> size_list(const std::vector<std::string>& toks, std::size_t line) {
  std::vector<std::size_t> out;
  for (std::size_t i = 2; i < toks.size(); ++i) {
    const auto star = toks[i].find('*');
    if (star == std::string::npos) {
      out.push_back(to_count(toks[i], line));
    } else {
      const auto v = to_count(toks[i].substr(0, star), line);
      const auto k = to_count(toks[i].substr(star + 1), line);
      out.insert(out.end(), k, v);
    }
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string out;
  for (auto x : v) out += (out.empty() ? "" : " ") + std::to_string(x);
  return out.empty() ? "(none)" : out;
}

std::vector<std::size_t> sizes_of(const std::vector<std::vector<Permutation>>& sets) {
  std::vector<std::size_t> out;
  for (const auto& s : sets) out.push_back(s.size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text, std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  bool have_version = false;
  std::set<std::string> names;

  for (const auto& st : split_statements(text)) {
    const auto where = "line " + std::to_string(st.line) + ": ";
    const auto toks = words_of(st.text);
    const auto& key = toks.front();

    if (key == "base" || key == "gen" || key == "rep" || key == "word") {
      if (ds.n == 0) throw ParseError(where + "'" + key + "' before 'n'");
      const auto eq = st.text.find('=');
      if (eq == std::string::npos) throw ParseError(where + "expected '" + key + " <name> = <cycles>'");
      const auto head = words_of(st.text.substr(0, eq));
      if (head.size() != 2) throw ParseError(where + "expected exactly one name before '='");
      if (!names.insert(head[1]).second) throw ParseError(where + "name '" + head[1] + "' used twice");
      const auto degree = key == "gen" ? 2 * ds.n : ds.n;
      Permutation p;
      try {
        p = parse_cycles(st.text.substr(eq + 1), degree);
      } catch (const ParseError& e) {
        throw ParseError(where + head[1] + ": " + e.what());
      }
      if (key == "gen") {
        try {
          IsoElement check(p);
        } catch (const ValidationError& e) {
          throw ValidationError(where + head[1] + ": " + e.what());
        }
      }
      auto& target = key == "base" ? ds.base : key == "gen" ? ds.generators
                   : key == "rep"  ? ds.representatives : ds.words;
      target.push_back({head[1], std::move(p)});
      continue;
    }

    if (key == "dataset") {
      if (toks.size() != 2 || toks[1] != "1") throw ParseError(where + "unsupported dataset version");
      have_version = true;
    } else if (key == "n") {
      if (toks.size() != 2) throw ParseError(where + "expected 'n <degree>'");
      if (ds.n != 0) throw ParseError(where + "'n' given twice");
      ds.n = to_count(toks[1], st.line);
      if (ds.n < 2) throw ParseError(where + "degree must be at least 2");
    } else if (key == "group" || key == "diagonal-group") {
      if (toks.size() != 2) throw ParseError(where + "expected '" + key + " <spec>'");
      try {
        parse_group_spec(toks[1]);
      } catch (const ParseError& e) {
        throw ParseError(where + e.what());
      }
      (key == "group" ? ds.group_spec : ds.diagonal_group_spec) = toks[1];
    } else if (key == "include-base") {
      if (toks.size() != 1) throw ParseError(where + "'include-base' takes no arguments");
      ds.include_base = true;
    } else if (key == "expect") {
      if (toks.size() < 3) throw ParseError(where + "expected 'expect <key> <values>'");
      const auto& what = toks[1];
      auto& e = ds.expected;
      if (what == "orbit_sizes") {
        e.orbit_sizes = size_list(toks, st.line);
      } else if (what == "base_split") {
        e.base_split = size_list(toks, st.line);
      } else {
        if (toks.size() != 3) throw ParseError(where + "expected a single value for " + what);
        const auto v = to_count(toks[2], st.line);
        if (what == "group_order") e.group_order = v;
        else if (what == "diagonal_index") e.diagonal_index = v;
        else if (what == "code_size") e.code_size = v;
        else if (what == "min_distance") e.min_distance = v;
        else if (what == "r") e.r = v;
        else if (what == "m") e.m = v;
        else throw ParseError(where + "unknown expectation '" + what + "'");
      }
    } else {
      throw ParseError(where + "unknown statement '" + key + "'");
    }
  }
  if (!have_version) throw ParseError(ds.name + ": missing 'dataset 1;' header");
  if (ds.n == 0) throw ParseError(ds.name + ": missing 'n'");
  if (ds.include_base && ds.base.empty()) throw ParseError(ds.name + ": include-base without base entries");
  if (ds.group_spec && ds.base.empty()) throw ParseError(ds.name + ": group given without base entries");
  if (!ds.representatives.empty() && ds.generators.empty() && ds.base.empty()) {
    throw ParseError(ds.name + ": representatives without generators");
  }
  return ds;
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("MOLSKIT_DATA"); env && *env) return env;
  return MOLSKIT_DEFAULT_DATA_DIR;
}

Dataset load_dataset(const std::string& name_or_path) {
  std::filesystem::path path;
  std::string name = name_or_path;
  if (std::find(kShipped.begin(), kShipped.end(), name_or_path) != kShipped.end()) {
    path = data_directory() / (name_or_path + ".txt");
  } else if (std::filesystem::is_regular_file(name_or_path)) {
    path = name_or_path;
  } else if (std::filesystem::is_regular_file(name_or_path + ".txt")) {
    path = name_or_path + ".txt";
  } else {
    throw ParseError("unknown dataset or missing file '" + name_or_path + "'");
  }
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str(), path.stem().string() == name ? name : path.string());
}

AssembledCode assemble_code(const Dataset& ds) {
  std::vector<std::string> mismatches;
  auto expect_eq = [&](const char* what, std::size_t expected, std::size_t actual) {
    if (expected != actual) {
      mismatches.push_back(std::string(what) + ": expected " + std::to_string(expected) + ", computed " +
                           std::to_string(actual));
    }
  };

  AssembledCode out{ds.n, std::nullopt, {}, {}, {}, std::nullopt, PermutationCode(ds.n, {})};

  std::vector<IsoElement> gens;
  if (!ds.base.empty()) {
    std::vector<Permutation> base_gens;
    for (const auto& b : ds.base) base_gens.push_back(b.perm);
    out.base_elements = generate_closure(base_gens);
    std::sort(out.base_elements.begin(), out.base_elements.end());
    if (ds.group_spec) {
      const auto g = parse_group_spec(*ds.group_spec);
      if (!is_regular_copy_of(out.base_elements, g)) {
        mismatches.push_back("base: <" + std::to_string(ds.base.size()) + " generators> of order " +
                             std::to_string(out.base_elements.size()) + " is not a regular copy of " +
                             *ds.group_spec);
      }
    }
    for (const auto& b : ds.base) gens.push_back(diagonal(b.perm));
  }
  for (const auto& g : ds.generators) gens.push_back(IsoElement(g.perm));

  if (!gens.empty()) {
    out.group = generate_group(gens);
    const auto order = *out.group->order();
    if (ds.expected.group_order) expect_eq("group order", *ds.expected.group_order, order);

    std::vector<std::vector<Permutation>> rep_orbits;
    for (const auto& rep : ds.representatives) {
      auto words = orbit(rep.perm, *out.group);
      std::sort(words.begin(), words.end());
      rep_orbits.push_back(words);
      out.orbits.push_back({rep.name, std::move(words)});
    }
    if (!ds.expected.orbit_sizes.empty() && sizes_of(rep_orbits) != ds.expected.orbit_sizes) {
      mismatches.push_back("orbit sizes: expected " + join_sizes(ds.expected.orbit_sizes) + ", computed " +
                           join_sizes(sizes_of(rep_orbits)));
    }
    if (!out.base_elements.empty()) {
      out.base_split = orbit_split(out.base_elements, *out.group);
      if (!ds.expected.base_split.empty() && sizes_of(out.base_split) != ds.expected.base_split) {
        mismatches.push_back("base split: expected " + join_sizes(ds.expected.base_split) + ", computed " +
                             join_sizes(sizes_of(out.base_split)));
      }
    }
    if (ds.diagonal_group_spec) {
      const auto target = parse_group_spec(*ds.diagonal_group_spec);
      const auto found = find_regular_diagonal_subgroup(*out.group, target);
      if (found.elements.empty()) {
        mismatches.push_back("diagonal group: no regular diagonal copy of " + *ds.diagonal_group_spec +
                             (found.complete ? " exists in U" : " found within the node limit"));
      } else {
        out.diagonal_index = order / found.elements.size();
        if (ds.expected.diagonal_index) expect_eq("diagonal index", *ds.expected.diagonal_index, *out.diagonal_index);
      }
    }
  }

  std::vector<Permutation> words;
  std::unordered_set<Permutation, PermutationHash> seen;
  auto add_set = [&](const std::vector<Permutation>& set, const std::string& label) {
    for (const auto& w : set) {
      if (!seen.insert(w).second) {
        mismatches.push_back(label + " shares the word " + format_cycles(w) + " with an earlier part");
        return;
      }
      words.push_back(w);
    }
  };
  for (const auto& o : out.orbits) add_set(o.words, "orbit of " + o.name);
  if (ds.include_base) add_set(out.base_elements, "base group");
  for (const auto& w : ds.words) words.push_back(w.perm);

  if (ds.expected.code_size) expect_eq("code size", *ds.expected.code_size, words.size());
  if (!mismatches.empty()) {
    std::string msg = ds.name + " does not match its expected values:";
    for (const auto& m : mismatches) msg += "\n  " + m;
    throw ValidationError(msg);
  }
  out.code = PermutationCode(ds.n, std::move(words));
  return out;
}

DoubleCosetReport double_coset(const IsoGroup& group, const Permutation& b, std::span<const Permutation> orbit) {
  std::set<Permutation> h, k;
  for (const auto& g : group.elements()) {
    if (g.block_swap()) continue;
    auto parts = g.decompose();
    h.insert(inverse(parts.lower));
    k.insert(std::move(parts.upper));
  }
  std::set<Permutation> coset;
  for (const auto& x : h)
    for (const auto& y : k) coset.insert(compose(compose(x, b), y));
  const std::set<Permutation> target(orbit.begin(), orbit.end());
  return {h.size(), k.size(), coset == target};
}

std::string write_code_file(const PermutationCode& code, std::string_view comment) {
  std::string out;
  if (!comment.empty()) {
    std::istringstream in{std::string(comment)};
    std::string line;
    while (std::getline(in, line)) out += "# " + line + "\n";
  }
  out += "dataset 1;\nn " + std::to_string(code.n()) + ";\n";
  for (std::size_t i = 0; i < code.size(); ++i) {
    out += "word w" + std::to_string(i + 1) + " = " + format_cycles(code.words()[i]) + ";\n";
  }
  out += "expect code_size " + std::to_string(code.size()) + ";\n";
  return out;
}

}  // namespace molskit
