#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "mtkink/cubic_roots.hpp"
#include "mtkink/units_params.hpp"
#include "support/schema_check.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = mtkink::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json call_json(const std::vector<std::string>& args, const std::string& schema) {
  const auto r = call(args);
  REQUIRE_MESSAGE(r.code == 0, r.err);
  const auto doc = json::parse(r.out);
  const auto errors =
      schema_check::validate(doc, schema_check::load(std::string(MTKINK_SCHEMA_DIR) + "/" +
                                                     schema + ".schema.json"));
  for (const auto& e : errors) FAIL_CHECK(e);
  return doc;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "mtkink_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("kink summary for the paper preset") {
  const auto j = call_json({"kink", "--preset", "paper"}, "kink");
  CHECK(j["v_paper"].get<double>() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(j["t_T_for_1um"].get<double>() == doctest::Approx(5e-7).epsilon(0.01));
  CHECK(j["t_T_for_1um"].get<double>() ==
        doctest::Approx(1e-6 / j["v_paper"].get<double>()).epsilon(1e-15));
  CHECK(j["Delta_eV"].get<double>() == doctest::Approx(1.0).epsilon(0.01));
  const auto& r = j["roots"];
  CHECK(r["a"].get<double>() + r["d"].get<double>() + r["b"].get<double>() ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("kink at sigma = 0 and beyond the critical forcing") {
  const auto j = call_json({"kink", "--sigma", "0"}, "kink");
  CHECK(j["roots"]["a"] == -1.0);
  CHECK(j["roots"]["d"] == 0.0);
  CHECK(j["roots"]["b"] == 1.0);
  CHECK(j["rho_consistent"] == 0.0);
  CHECK(j["v_paper"].is_null());

  const auto lost = call({"kink", "--sigma", "0.5"});
  CHECK(lost.code == 3);
  CHECK(lost.err.find("kink regime lost") != std::string::npos);
  CHECK(lost.out.empty());
}

TEST_CASE("kink profile CSV") {
  const auto path = scratch("profile.csv");
  const auto r = call({"kink", "--sigma", "0.2", "--csv", path.string(), "--points", "41"});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(path));
  REQUIRE(rows.size() == 42);
  CHECK(rows[0] == "xi,psi,dpsi_dxi,residual");
  const auto first = split(rows[1]);
  CHECK(std::stod(first[0]) == -20.0);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::abs(std::stod(split(rows[i])[3])) < 1e-10);
}

TEST_CASE("validation and usage errors map to exit 2") {
  CHECK(call({"kink", "--M", "-1"}).code == 2);
  CHECK(call({"kink", "--M", "abc"}).code == 2);
  CHECK(call({"kink", "--preset", "nope"}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"kink", "--M", "-1"}).err.rfind("error: ", 0) == 0);
  CHECK(call({"kink", "--xi-min", "1", "--xi-max", "0"}).code == 2);
  CHECK(call({"sweep", "--from", "0"}).code == 2);  // --to missing
  CHECK(call({"simulate", "--dt", "1e-9"}).code == 2);  // above the stability bound
  const auto help = call({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate") != std::string::npos);
}

TEST_CASE("config file then flags override the preset") {
  auto p = mtkink::units::load_preset("paper");
  p.gamma *= 3.0;
  const auto cfg = scratch("tripled.cfg");
  {
    std::ofstream f(cfg);
    f.precision(17);
    f << "gamma = " << p.gamma << "\n";
  }
  const auto via_file = call_json({"kink", "--config", cfg.string()}, "kink");
  const auto base = call_json({"kink"}, "kink");
  CHECK(via_file["v_consistent"].get<double>() < base["v_consistent"].get<double>());

  std::ostringstream g;
  g.precision(17);
  g << mtkink::units::load_preset("paper").gamma;
  const auto back = call_json({"kink", "--config", cfg.string(), "--gamma", g.str()}, "kink");
  CHECK(back == base);

  const auto jcfg = scratch("tripled.json");
  std::ofstream(jcfg) << mtkink::units::to_json(p);
  CHECK(call_json({"kink", "--config", jcfg.string()}, "kink") == via_file);
}

TEST_CASE("temperature overrides re-derive A") {
  // A = c_temp (Tc - T); paper preset has Tc - T = 1
  const auto p = mtkink::units::load_preset("paper");
  auto warmer = mtkink::units::params_from_temperature(p.c_temp, 290.0, p.Tc, p);
  CHECK(warmer.A == doctest::Approx(10.0 * p.A));
  const auto j = call_json({"kink", "--T", "290"}, "kink");
  const double sigma = mtkink::units::derive(warmer).sigma;
  CHECK(j["sigma"].get<double>() == doctest::Approx(sigma).epsilon(1e-14));
  // explicit A wins
  const auto k = call_json({"kink", "--T", "290", "--A", std::to_string(p.A)}, "kink");
  CHECK(k["sigma"].get<double>() == doctest::Approx(call_json({"kink"}, "kink")["sigma"].get<double>()).epsilon(1e-6));
  CHECK(call({"kink", "--T", "300"}).code == 3);  // no double well at Tc
}

TEST_CASE("presets from MTKINK_PRESET_DIR") {
  const auto dir = scratch("presets");
  fs::create_directories(dir);
  auto p = mtkink::units::load_preset("paper");
  p.E_field *= 2.0;
  std::ofstream(dir / "doubled.json") << mtkink::units::to_json(p);
  ::setenv("MTKINK_PRESET_DIR", dir.c_str(), 1);
  const auto j = call_json({"kink", "--preset", "doubled"}, "kink");
  ::unsetenv("MTKINK_PRESET_DIR");
  CHECK(j["sigma"].get<double>() == doctest::Approx(2.0 * 0.003).epsilon(1e-9));
  CHECK(call({"kink", "--preset", "doubled"}).code == 2);
}

TEST_CASE("simulate with t_end = 0 gives one sample") {
  const auto j = call_json({"simulate", "--t-end", "0", "--n-grid", "256"}, "simulate");
  CHECK(j["samples"] == 1);
  CHECK(j["steps"] == 0);
  CHECK(j["v_measured"].is_null());
  CHECK(j["energy_drift"] == 0.0);
}

TEST_CASE("simulate reports conservation without friction or field") {
  const auto csv = scratch("cons.csv");
  const auto j = call_json({"simulate", "--gamma", "0", "--efield", "0", "--n-grid", "512",
                            "--csv", csv.string()},
                           "simulate");
  CHECK(j["steps"] == 10000);
  CHECK(j["v_predicted"] == 0.0);
  CHECK(j["relative_error"].is_null());
  CHECK(j["energy_drift"].get<double>() < 1e-3);
  CHECK(j["energy_drift_excitation"].get<double>() < 1e-3);
  const auto rows = lines(slurp(csv));
  CHECK(rows[0] == "t,front_x,energy");
  CHECK(rows.size() == j["samples"].get<std::size_t>() + 1);
}

TEST_CASE("simulate tracks the driven front") {
  const auto snaps = scratch("snap.csv");
  const auto j = call_json({"simulate", "--n-grid", "2048", "--snapshots", snaps.string(),
                            "--sample-every", "2000"},
                           "simulate");
  CHECK(std::abs(j["relative_error"].get<double>()) < 0.02);
  const auto rows = lines(slurp(snaps));
  CHECK(split(rows[0]).size() == 2049);
  CHECK(rows.size() == j["samples"].get<std::size_t>() + 1);

  const auto pair = call_json({"simulate", "--preset", "strong-field", "--initial", "pair",
                               "--n-grid", "1024", "--sites", "10"},
                              "simulate");
  CHECK(std::abs(pair["relative_error"].get<double>()) < 0.02);
}

TEST_CASE("stringmap examples") {
  const auto b = call_json({"stringmap", "--rho", "2"}, "stringmap");
  CHECK(b["c_x"] == 25.0);
  CHECK(b["v_s_squared"] == 0.0);
  CHECK(b["reality"].is_null());

  const auto p = call_json({"stringmap", "--preset", "paper"}, "stringmap");
  CHECK(p["c_s"].get<double>() > 1.0);
  CHECK(p["c_s"].get<double>() < 25.0);
  CHECK(p["reality"]["agree"] == true);
  CHECK(p["reality"]["printed"] == false);
  const auto pm = call_json({"stringmap", "--velocity-mode", "paper"}, "stringmap");
  CHECK(pm["rho"] == p["reality"]["rho_paper"]);

  const auto adm = call_json({"stringmap", "--adm", "--k", "3", "--a", "0"}, "adm");
  CHECK(adm["adm_mass"] == 1.0);
  CHECK(call({"stringmap", "--adm", "--k", "2"}).code == 2);
  CHECK(call({"stringmap", "--rho", "0"}).code == 2);
  // no friction: the paper-mode rho vanishes
  CHECK(call({"stringmap", "--preset", "zero-friction", "--velocity-mode", "paper"}).code == 3);
}

TEST_CASE("collapse estimates and bound") {
  const auto j = call_json({"collapse", "--mgus-gev", "1e18", "--e-ev", "1", "--t-sec", "1"},
                           "collapse");
  CHECK(j["N"].get<double>() == doctest::Approx(6.582119569e11).epsilon(1e-12));
  CHECK(j["brain_fraction"].get<double>() == doctest::Approx(0.06582119569));
  const auto inv = call_json({"collapse", "--n", "6.582119569e11"}, "collapse");
  CHECK(inv["t_col_s"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(call({"collapse", "--n", "1", "--t-sec", "1"}).code == 2);
  CHECK(call({"collapse", "--e-ev", "0"}).code == 2);

  const auto bound = call_json({"collapse", "--bound", "--L", "1e-6", "--Ls", "1e-35"}, "bound");
  CHECK(bound["delta_L_m"].get<double>() == doctest::Approx(3.16e-21).epsilon(0.001));
}

TEST_CASE("collapse dephasing trace") {
  const auto csv = scratch("trace.csv");
  const auto j = call_json({"collapse", "--trace", "--dim", "2", "--lambda", "2e3", "--csv",
                            csv.string()},
                           "trace");
  CHECK(std::abs(j["pairs"][0]["relative_error"].get<double>()) < 0.01);
  const auto rows = lines(slurp(csv));
  CHECK(rows[0] == "t,abs_rho_0_1,purity");
  CHECK(rows.size() == j["steps"].get<std::size_t>() + 2);

  const auto many = call_json({"collapse", "--trace", "--dim", "5", "--lambda", "50", "--pair",
                               "0,4", "--pair", "2,3", "--h-ev", "1e-12"},
                              "trace");
  for (const auto& p : many["pairs"]) CHECK(std::abs(p["relative_error"].get<double>()) < 0.01);

  const auto none = call({"collapse", "--trace", "--lambda", "0", "--dt", "1e-3", "--steps", "50"});
  CHECK(none.code == 4);
  CHECK(none.err.find("no decay") != std::string::npos);
  CHECK(call({"collapse", "--trace", "--pair", "0,2"}).code == 2);
  CHECK(call({"collapse", "--trace", "--lambda", "0"}).code == 2);
}

TEST_CASE("sweep rows") {
  SUBCASE("constant rows at E = 0") {
    const auto r = call({"sweep", "--var", "E_field", "--from", "0", "--to", "0", "--points", "4"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 2; i < rows.size(); ++i) CHECK(rows[i] == rows[1]);
    CHECK(split(rows[1])[2] == "kink");
  }
  SUBCASE("velocity grows with the field over two decades") {
    const auto p = mtkink::units::load_preset("paper");
    const auto r = call({"sweep", "--from", std::to_string(p.E_field), "--to",
                         std::to_string(100.0 * p.E_field), "--points", "21", "--log"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    double prev_c = 0.0, prev_p = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto c = split(rows[i]);
      REQUIRE(c[2] == "kink");
      const double vc = std::stod(c[6]), vp = std::stod(c[7]);
      CHECK(vc > prev_c);
      CHECK(vp > prev_p);
      prev_c = vc;
      prev_p = vp;
    }
  }
  SUBCASE("regime flips at the critical field") {
    const auto p = mtkink::units::load_preset("paper");
    const double e_c = mtkink::cubic::critical_sigma() / mtkink::units::derive(p).sigma * p.E_field;
    const auto csv = scratch("sweep.csv");
    const auto r = call({"sweep", "--from", std::to_string(0.5 * e_c), "--to",
                         std::to_string(1.5 * e_c), "--points", "100", "--csv", csv.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const auto rows = lines(slurp(csv));
    REQUIRE(rows.size() == 101);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto c = split(rows[i]);
      const double e = std::stod(c[0]);
      CHECK(c.size() == 12);
      CHECK(c[2] == (e < e_c ? "kink" : "kink_lost"));
      if (c[2] == "kink_lost") CHECK(c[3].empty());
    }
  }
  SUBCASE("temperature crossing Tc") {
    const auto r = call({"sweep", "--var", "T", "--from", "295", "--to", "305", "--points", "11"});
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto c = split(rows[i]);
      CHECK(c[2] == (std::stod(c[0]) < 300.0 ? "kink" : "no_double_well"));
    }
  }
  CHECK(call({"sweep", "--var", "M", "--from", "0", "--to", "1"}).code == 2);
  CHECK(call({"sweep", "--from", "0", "--to", "1", "--log"}).code == 2);
}

TEST_CASE("preset subcommand round trips") {
  const auto list = call({"preset", "--list"});
  CHECK(list.out == "paper\nzero-friction\nstrong-field\n");
  for (const auto& name : mtkink::units::preset_names()) {
    const auto kv = call({"preset", name});
    CHECK(mtkink::units::parse_params_kv(kv.out) == mtkink::units::load_preset(name));
    const auto js = call({"preset", name, "--format", "json"});
    CHECK(mtkink::units::parse_params_json(js.out) == mtkink::units::load_preset(name));
    const auto errors = schema_check::validate(
        json::parse(js.out),
        schema_check::load(std::string(MTKINK_SCHEMA_DIR) + "/params.schema.json"));
    CHECK(errors.empty());
  }
  CHECK(call({"preset"}).code == 2);
}

TEST_CASE("schema checker rejects malformed documents") {
  const auto schema = schema_check::load(std::string(MTKINK_SCHEMA_DIR) + "/bound.schema.json");
  CHECK(schema_check::validate(json{{"mode", "bound"}, {"L_m", 1.0}, {"L_s_m", 1.0}, {"delta_L_m", 1.0}},
                               schema)
            .empty());
  CHECK_FALSE(schema_check::validate(json{{"mode", "bound"}, {"L_m", 1.0}, {"L_s_m", 1.0}}, schema).empty());
  CHECK_FALSE(schema_check::validate(
                  json{{"mode", "x"}, {"L_m", 1.0}, {"L_s_m", 1.0}, {"delta_L_m", 1.0}}, schema)
                  .empty());
  CHECK_FALSE(schema_check::validate(
                  json{{"mode", "bound"}, {"L_m", -1.0}, {"L_s_m", 1.0}, {"delta_L_m", 1.0}}, schema)
                  .empty());
  CHECK_FALSE(schema_check::validate(json{{"mode", "bound"},
                                          {"L_m", 1.0},
                                          {"L_s_m", 1.0},
                                          {"delta_L_m", 1.0},
                                          {"extra", 0}},
                                     schema)
                  .empty());
}

TEST_CASE("identical invocations give identical bytes") {
  const std::vector<std::vector<std::string>> commands = {
      {"kink"},
      {"stringmap"},
      {"collapse", "--trace", "--dim", "3", "--lambda", "10"},
      {"sweep", "--from", "1e5", "--to", "1e8", "--points", "9", "--log"},
      {"simulate", "--n-grid", "256", "--sites", "2"},
  };
  for (const auto& args : commands) {
    const auto a = call(args), b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  const auto p1 = scratch("det1.csv"), p2 = scratch("det2.csv");
  call({"simulate", "--n-grid", "256", "--sites", "2", "--csv", p1.string()});
  call({"simulate", "--n-grid", "256", "--sites", "2", "--csv", p2.string(), "--serial"});
  CHECK(slurp(p1) == slurp(p2));
}
