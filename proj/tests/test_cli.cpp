#include <doctest.h>

#include <wheelbounds/cli.hpp>
#include <wheelbounds/wheel_geometry.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using wheelbounds::run_cli;
using nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

json load_schema(const std::string& name) {
  std::ifstream in(std::string(WHEELBOUNDS_SOURCE_DIR) + "/share/schema/" + name);
  REQUIRE(in.good());
  return json::parse(in);
}

// Structural validation against the shipped schema subset: object shape,
// required keys, primitive types, string enums, array items.
void check_schema(const json& v, const json& sch) {
  const std::string type = sch.at("type").get<std::string>();
  if (type == "object") {
    REQUIRE(v.is_object());
    if (sch.contains("required"))
      for (const auto& key : sch.at("required"))
        REQUIRE_MESSAGE(v.contains(key.get<std::string>()),
                        "missing key " << key.get<std::string>());
    if (sch.contains("properties"))
      for (const auto& [key, sub] : sch.at("properties").items())
        if (v.contains(key)) check_schema(v.at(key), sub);
  } else if (type == "array") {
    REQUIRE(v.is_array());
    if (sch.contains("items"))
      for (const auto& el : v) check_schema(el, sch.at("items"));
  } else if (type == "number") {
    REQUIRE(v.is_number());
  } else if (type == "integer") {
    REQUIRE(v.is_number_integer());
  } else if (type == "boolean") {
    REQUIRE(v.is_boolean());
  } else if (type == "string") {
    REQUIRE(v.is_string());
    if (sch.contains("enum")) {
      bool found = false;
      for (const auto& e : sch.at("enum")) found = found || e == v;
      CHECK_MESSAGE(found, "value " << v << " not in enum");
    }
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

} // namespace

TEST_CASE("bounds command reports the reference point") {
  auto r = cli({"bounds", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--json"});
  CHECK(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["value"].get<double>() == doctest::Approx(39.0 / 7.0).epsilon(1e-12));
  CHECK(doc["regime"] == "intermediate");
  CHECK(doc["t_opt"].get<double>() == doctest::Approx(11.0 / 7.0).epsilon(1e-12));
  CHECK(doc["m11"].get<double>() == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(doc["m12"].get<double>() == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(doc["fields"].size() == 3);
  check_schema(doc, load_schema("bounds_report.schema.json"));

  auto text = cli({"bounds", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25"});
  CHECK(text.code == 0);
  CHECK(text.out.find("value: 5.57142857143") != std::string::npos);
  CHECK(text.out.find("regime: intermediate") != std::string::npos);
}

TEST_CASE("bounds command output is deterministic") {
  auto a = cli({"bounds", "--k1", "1", "--k2", "2", "--m1", "0.1", "--m2", "0.25", "--json"});
  auto b = cli({"bounds", "--k1", "1", "--k2", "2", "--m1", "0.1", "--m2", "0.25", "--json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("bounds command validates input and flag pairs") {
  CHECK(cli({"bounds", "--k1", "1", "--k2", "2", "--m1", "0.7", "--m2", "0.4"}).code == 2);
  CHECK(cli({"bounds", "--m1", "0.14", "--m2", "0.25"}).code == 2);
  CHECK(cli({"bounds", "--k1", "1", "--m1", "0.14", "--m2", "0.25"}).code == 2);
  CHECK(cli({"bounds", "--k1", "1", "--k2", "2", "--rho1", "1", "--rho2", "2", "--m1", "0.14",
             "--m2", "0.25"})
            .code == 2);
  CHECK(cli({"bounds", "--k1", "-1", "--k2", "2", "--m1", "0.14", "--m2", "0.25"}).code == 2);
}

TEST_CASE("bounds dual path is the literal image of the primal") {
  auto primal =
      cli({"bounds", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--json"});
  auto dual =
      cli({"bounds", "--rho1", "1", "--rho2", "2", "--m1", "0.14", "--m2", "0.25", "--json"});
  CHECK(dual.code == 0);
  auto dp = json::parse(primal.out);
  auto dd = json::parse(dual.out);
  CHECK(dd["problem"] == "resistivity");
  CHECK(dd.contains("rho1"));
  CHECK_FALSE(dd.contains("k1"));
  CHECK(dd["value"].get<double>() == dp["value"].get<double>());
  CHECK(dd["t_opt"].get<double>() == dp["t_opt"].get<double>());
  check_schema(dd, load_schema("bounds_report.schema.json"));
}

TEST_CASE("wheel command reports the three reference constructions") {
  auto b2 = cli({"wheel", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--json"});
  CHECK(b2.code == 0);
  auto d2 = json::parse(b2.out);
  CHECK(d2["kind"] == "W2_13");
  CHECK(d2["r0"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(d2["k_radial"].get<double>() == doctest::Approx(39.0 / 7.0).epsilon(1e-9));
  CHECK(d2["gap"].get<double>() < 1e-9);
  const auto& areas = d2["areas"];
  CHECK(areas[0].get<double>() + areas[1].get<double>() + areas[2].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-12));
  check_schema(d2, load_schema("wheel_report.schema.json"));

  auto b3 = cli({"wheel", "--k1", "1", "--k2", "2", "--m1", "0.1", "--m2", "0.25", "--json"});
  auto d3 = json::parse(b3.out);
  CHECK(d3["kind"] == "W2_123");
  CHECK(d3["r0"].get<double>() == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(d3["k_radial"].get<double>() == doctest::Approx(62.0 / 9.0).epsilon(1e-9));

  auto b1 = cli({"wheel", "--k1", "1", "--k2", "2", "--m1", "0.3", "--m2", "0.25", "--json"});
  auto d1 = json::parse(b1.out);
  CHECK(d1["kind"] == "W2_13_1");
  CHECK(d1["c_env"].get<double>() == doctest::Approx(0.1615).epsilon(2e-3));
  CHECK(d1["k_radial"].get<double>() == doctest::Approx(23.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("wheel command writes a readable phase map") {
  const std::string path = "cli_wheel_map_test.pgm";
  auto r = cli({"wheel", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--pgm", path,
                "--n-spikes", "8", "--nr", "32", "--ntheta", "64", "--json"});
  CHECK(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["pgm"] == path);
  auto map = wheelbounds::read_pgm(path);
  CHECK(map.nr == 32);
  CHECK(map.ntheta == 64);
  auto fr = map.measured_fractions();
  CHECK(fr[0] == doctest::Approx(0.14).epsilon(0.05));
  CHECK(fr[1] == doctest::Approx(0.25).epsilon(0.05));
  std::remove(path.c_str());
}

TEST_CASE("verify sanity run is exact and exits zero") {
  auto r = cli({"verify", "--sanity", "--k1", "1.5", "--k2", "2", "--nr", "24", "--ntheta", "48",
                "--contrast", "100", "--tolerance", "1e-6", "--json"});
  CHECK(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["kind"] == "homogeneous");
  CHECK(doc["k_eff"].get<double>() == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(doc["rel_err"].get<double>() < 1e-6);
  CHECK(doc["iterations"].get<int>() == 0);
  CHECK(doc["passed"].get<bool>());
  check_schema(doc, load_schema("verify_report.schema.json"));
}

TEST_CASE("verify exits three when the tolerance is unreachable") {
  auto r = cli({"verify", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--nr", "24",
                "--ntheta", "48", "--n-spikes", "8", "--contrast", "1e3", "--tolerance", "1e-9"});
  CHECK(r.code == 3);
  CHECK(r.out.find("verification: FAILED") != std::string::npos);
}

TEST_CASE("verify series reports the extrapolation") {
  auto r = cli({"verify", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--nr", "16",
                "--ntheta", "96", "--n-spikes", "16", "--contrast", "1e3", "--series",
                "--tolerance", "10", "--json"});
  CHECK(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["series"].get<bool>());
  CHECK(doc["runs"].size() == 3);
  CHECK(doc["runs"][0]["n_spikes"].get<int>() == 4);
  CHECK(doc["runs"][2]["n_spikes"].get<int>() == 16);
  CHECK(doc.contains("extrapolation"));
  check_schema(doc, load_schema("verify_report.schema.json"));
}

TEST_CASE("sweep emits stable CSV with regime transitions") {
  auto r = cli({"sweep", "--m2", "0.25", "--m1-start", "0", "--m1-stop", "0.4", "--m1-step",
                "0.01"});
  CHECK(r.code == 0);
  auto lines = split(r.out, '\n');
  REQUIRE(lines.back().empty());
  lines.pop_back();
  REQUIRE(lines.size() == 42);
  CHECK(lines[0] == "m1,m2,regime,B,t_opt");
  int small = 0, mid = 0, large = 0;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto cols = split(lines[i], ',');
    REQUIRE(cols.size() == 5);
    if (cols[2] == "small_m1") ++small;
    if (cols[2] == "intermediate") ++mid;
    if (cols[2] == "large_m1") ++large;
  }
  CHECK(small == 13);
  CHECK(mid == 4);
  CHECK(large == 24);
  CHECK(split(lines[1], ',')[3] == "14");
  CHECK(r.err.find("monotone non-increasing") != std::string::npos);
  CHECK(r.err.find("regime changes at m1 = 0.13 0.17") != std::string::npos);

  auto again = cli({"sweep", "--m2", "0.25", "--m1-start", "0", "--m1-stop", "0.4", "--m1-step",
                    "0.01"});
  CHECK(again.out == r.out);
}

TEST_CASE("sweep attainment columns match the bound") {
  auto r = cli({"sweep", "--m2", "0.25", "--m1-start", "0", "--m1-stop", "0.4", "--m1-step",
                "0.05", "--with-radial", "--with-fd", "--fd-nodes", "1500"});
  CHECK(r.code == 0);
  auto lines = split(r.out, '\n');
  lines.pop_back();
  REQUIRE(lines.size() == 10);
  CHECK(lines[0] == "m1,m2,regime,B,t_opt,k_radial,k_fd");
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto cols = split(lines[i], ',');
    REQUIRE(cols.size() == 7);
    const double b = std::stod(cols[3]);
    const double k_radial = std::stod(cols[5]);
    const double k_fd = std::stod(cols[6]);
    CHECK(std::abs(k_radial / b - 1.0) < 1e-9);
    CHECK(std::abs(k_fd / b - 1.0) < 2e-3);
  }
}

TEST_CASE("sweep rejects malformed ranges") {
  CHECK(cli({"sweep", "--m2", "0.25", "--m1-start", "0.3", "--m1-stop", "0.1", "--m1-step",
             "0.01"})
            .code == 2);
  CHECK(cli({"sweep", "--m2", "0.25", "--m1-start", "0", "--m1-stop", "0.4", "--m1-step", "0"})
            .code == 2);
  CHECK(cli({"sweep", "--m1-start", "0", "--m1-stop", "0.4", "--m1-step", "0.01"}).code == 2);
}

TEST_CASE("sweep writes the CSV to a file on request") {
  const std::string path = "cli_sweep_test.csv";
  auto r = cli({"sweep", "--m2", "0.25", "--m1-start", "0.1", "--m1-stop", "0.2", "--m1-step",
                "0.05", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "m1,m2,regime,B,t_opt");
  in.close();
  std::remove(path.c_str());
}

TEST_CASE("oracle command certifies the closed form") {
  auto r = cli({"oracle", "--k1", "1", "--k2", "2", "--m1", "0.14", "--m2", "0.25", "--json"});
  CHECK(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["value"].get<double>() == doctest::Approx(39.0 / 7.0).epsilon(1e-8));
  CHECK(doc["t_opt"].get<double>() == doctest::Approx(11.0 / 7.0).epsilon(1e-5));
  CHECK(doc["agreement"].get<double>() < 1e-8);
  check_schema(doc, load_schema("oracle_report.schema.json"));
}

TEST_CASE("elastic command reproduces the reference bound") {
  std::vector<std::string> base{"elastic", "--kappa1", "0.5",  "--eta1", "0.5", "--kappa2",
                                "2",       "--eta2",   "1",    "--m1",   "0.09", "--m2",
                                "0.16",    "--json"};
  auto r = cli(base);
  CHECK(r.code == 0);
  auto doc = json::parse(r.out);
  CHECK(doc["value"].get<double>() == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(doc["regime"] == "intermediate");
  CHECK(doc["t_opt"].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-5));
  CHECK(doc["m11"].get<double>() == doctest::Approx(0.096).epsilon(1e-9));
  CHECK(doc["m12"].get<double>() == doctest::Approx(0.08).epsilon(1e-9));
  check_schema(doc, load_schema("elastic_report.schema.json"));

  base.push_back("--dual");
  auto dual = cli(base);
  CHECK(dual.code == 0);
  auto dd = json::parse(dual.out);
  CHECK(dd["problem"] == "stiffness");
  CHECK(dd["value"].get<double>() == doc["value"].get<double>());
}

TEST_CASE("cli rejects unknown commands and reports help") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  auto help = cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("bounds") != std::string::npos);
  CHECK(help.out.find("verify") != std::string::npos);
}
