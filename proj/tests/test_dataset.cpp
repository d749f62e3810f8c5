#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "molskit/dataset.hpp"
#include "molskit/error.hpp"
#include "support.hpp"

using namespace molskit;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string error_of(std::string_view text) {
  try {
    parse_dataset(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse errors name the line") {
  CHECK(error_of("dataset 1;\nn 3;\nrep a = (1,2)") .find("line 3") != std::string::npos);
  CHECK(error_of("dataset 1;\nn 3;\nfoo;").find("unknown statement") != std::string::npos);
  CHECK(error_of("dataset 1;\nrep a = (1,2);").find("before 'n'") != std::string::npos);
  CHECK(error_of("dataset 1;\nn 3;\nrep a = (1,4);").find("line 3") != std::string::npos);
  CHECK(error_of("dataset 1;\nn 3;\nrep a = (1,2);\nrep a = (2,3);").find("used twice") != std::string::npos);
  CHECK(error_of("dataset 2;\nn 3;").find("version") != std::string::npos);
  CHECK(error_of("n 3;").find("dataset 1") != std::string::npos);
  CHECK(error_of("dataset 1;\nn 3;\nexpect colour 3;").find("unknown expectation") != std::string::npos);
  CHECK(error_of("dataset 1;\nn 3;\ngroup Q8;").find("line 3") != std::string::npos);
  CHECK(error_of("dataset 1;\nn 3;\ninclude-base;").find("include-base") != std::string::npos);
  CHECK_THROWS_AS(parse_dataset("dataset 1;\nn 3;\ngen g = (1,4);"), ValidationError);
  CHECK_THROWS_AS(parse_dataset("dataset 1;\nn 3;\nexpect m x;"), ParseError);
  CHECK_THROWS_AS(load_dataset("n13"), ParseError);
}

TEST_CASE("comments and layout") {
  const auto ds = parse_dataset(
      "# header\ndataset 1; n 4;\ngen g = Id;\n"
      "rep a =\n  (1, 2) # first\n  (3, 4);\n"
      "expect orbit_sizes 2*3 1;\n");
  CHECK(ds.n == 4);
  REQUIRE(ds.representatives.size() == 1);
  CHECK(ds.representatives[0].perm == cyc("(1,2)(3,4)", 4));
  CHECK(ds.expected.orbit_sizes == std::vector<std::size_t>{2, 2, 2, 1});
}

TEST_CASE("shipped datasets load") {
  const auto n35 = load_dataset("n35");
  CHECK(n35.n == 35);
  CHECK(n35.group_spec == "Z35");
  CHECK(n35.base.size() == 1);
  CHECK(n35.generators.size() == 2);
  CHECK(n35.representatives.size() == 3);
  CHECK(n35.include_base);
  CHECK(n35.expected.orbit_sizes == std::vector<std::size_t>{70, 70, 35});
  CHECK(n35.expected.base_split.size() == 18);
  CHECK(n35.expected.m == 6);

  const auto n14 = load_dataset("n14");
  CHECK(n14.expected.group_order == 21);
  CHECK(n14.representatives.size() == 4);
  CHECK(n14.expected.m == 4);

  const auto n21 = load_dataset("n21");
  CHECK(n21.expected.group_order == 105);
  CHECK(n21.representatives.size() == 1);
  CHECK(n21.representatives[0].perm.is_identity());
  CHECK(n21.expected.m == 5);

  const auto n96 = load_dataset("n96");
  CHECK(!n96.group_spec);
  CHECK(n96.diagonal_group_spec == "Z2xZ2xZ2xZ2xZ6");
}

TEST_CASE("assembly of the base groups") {
  const auto n35 = assemble_code(load_dataset("n35"));
  const auto r35 = regular_representation(cyclic(35));
  CHECK(n35.base_elements == [&] {
    auto v = r35;
    std::sort(v.begin(), v.end());
    return v;
  }());
  CHECK(n35.base_split.size() == 18);

  const auto n48 = assemble_code(load_dataset("n48"));
  CHECK(is_regular_copy_of(n48.base_elements, parse_group_spec("Z6xZ2xZ2xZ2")));
  const auto n63 = assemble_code(load_dataset("n63"));
  CHECK(is_regular_copy_of(n63.base_elements, parse_group_spec("Z3xZ21")));
}

TEST_CASE("n21 is a double coset") {
  const auto code = assemble_code(load_dataset("n21"));
  REQUIRE(code.orbits.size() == 1);
  const auto report = double_coset(*code.group, Permutation(21), code.orbits[0].words);
  CHECK(report.h_order == 21);
  CHECK(report.k_order == 5);
  CHECK(report.equal);
}

TEST_CASE("n56 orbit and stabilizer") {
  const auto code = assemble_code(load_dataset("n56"));
  CHECK(code.group->order() == 9408);
  REQUIRE(code.orbits.size() == 1);
  CHECK(code.orbits[0].words.size() == 392);
  CHECK(stabilizer(Permutation(56), *code.group).size() == 24);
}

TEST_CASE("mismatches are reported together") {
  auto text = slurp(data_directory() / "n20.txt");
  const auto pos = text.find("expect group_order 80;");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 22, "expect group_order 81;");
  text += "expect orbit_sizes 40 40;\n";
  auto ds = parse_dataset(text, "n20-edited");
  ds.expected.orbit_sizes = {40, 40};
  try {
    assemble_code(ds);
    FAIL("expected a mismatch");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("group order: expected 81, computed 80") != std::string::npos);
    CHECK(msg.find("orbit sizes: expected 40 40, computed 80") != std::string::npos);
  }
}

TEST_CASE("MOLSKIT_DATA overrides the data directory") {
  const auto dir = std::filesystem::temp_directory_path() / "molskit_data_override";
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "n20.txt");
    out << "dataset 1;\nn 3;\nword w = (1,2,3);\n";
  }
  setenv("MOLSKIT_DATA", dir.c_str(), 1);
  CHECK(data_directory() == dir);
  CHECK(load_dataset("n20").n == 3);
  unsetenv("MOLSKIT_DATA");
  CHECK(load_dataset("n20").n == 20);
  std::filesystem::remove_all(dir);
}

TEST_CASE("code files round trip") {
  const auto code = assemble_code(load_dataset("n20")).code;
  const auto text = write_code_file(code, "two\nlines");
  CHECK(text.rfind("# two\n# lines\ndataset 1;\nn 20;\n", 0) == 0);
  const auto back = assemble_code(parse_dataset(text));
  CHECK(back.code.words() == code.words());
  CHECK(!back.group);
}
