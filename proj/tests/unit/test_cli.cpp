#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "config.hpp"
#include "run.hpp"

using namespace deltaloop::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("deltaloop_test_" + name);
  fs::remove_all(p);
  return p;
}

RunConfig from_text(const std::string& text) {
  std::istringstream in(text);
  return load_config(in, "test.ini", 2);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream f(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(f, l);) out.push_back(l);
  return out;
}

int run_binary(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(DELTALOOP_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Ini, ParsesSectionsAndComments) {
  std::istringstream in("# top\n[run]\nkind = count ; trailing\n\n[params]\nbetas = 1, 2\n");
  const auto f = parse_ini(in, "x.ini");
  EXPECT_EQ(f.at("run").at("kind").value, "count");
  EXPECT_EQ(f.at("run").at("kind").line, 3);
  EXPECT_EQ(f.at("params").at("betas").value, "1, 2");
}

TEST(Ini, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    try {
      std::istringstream in(text);
      parse_ini(in, "x.ini");
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("[run]\nkind\n"), 2);
  EXPECT_EQ(line_of("a = 1\n"), 1);
  EXPECT_EQ(line_of("[run\n"), 1);
  EXPECT_EQ(line_of("[run]\nkind = a\nout = b\nkind = c\n"), 4);
}

TEST(Config, UnknownKeysAndBadValuesAreReported) {
  try {
    from_text("[run]\nkind = count\n[params]\nbetta = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
    EXPECT_NE(std::string(e.what()).find("test.ini:4"), std::string::npos);
  }
  try {
    from_text("[run]\nkind = count\n[grid]\nn1d = many\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 4);
  }
}

TEST(Config, UnknownKindListsValidKinds) {
  try {
    from_text("[run]\nkind = plot\n");
    FAIL();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_EQ(e.line(), 2);
    for (const auto& k : kind_names()) EXPECT_NE(msg.find(k), std::string::npos) << k;
  }
}

TEST(Config, KindSpecificRequirements) {
  EXPECT_THROW(from_text("[run]\nkind = transverse\n[params]\nbeta = 10\n").validate(), ConfigError);
  EXPECT_THROW(from_text("[run]\nkind = count\n[params]\nbeta = 10\n").validate(), ConfigError);
  EXPECT_THROW(
      from_text("[run]\nkind = sweep-thm1\n[curve]\nkind = circle\n[params]\nbetas = 40, 80, 160\n").validate(),
      ConfigError);
  try {
    from_text("[run]\nkind = count\n[curve]\nkind = circle\n[params]\nbetas = 80, 40\n").validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 6);
  }
  EXPECT_NO_THROW(from_text("[run]\nkind = transverse\n[params]\na = 1\nbeta = 10\n").validate());
}

TEST(Config, BetaRangeIsGeometric) {
  const auto c = from_text("[params]\nbeta_range = 40, 320, 4\n");
  ASSERT_EQ(c.betas.size(), 4u);
  EXPECT_DOUBLE_EQ(c.betas[0], 40.0);
  EXPECT_NEAR(c.betas[1], 80.0, 1e-12);
  EXPECT_NEAR(c.betas[2], 160.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.betas[3], 320.0);
}

TEST(Config, CurveSections) {
  const auto c = from_text("[curve]\nkind = ellipse\nsemi_major = 3\nsemi_minor = 1.5\n[sampling]\ndensity = 500\n");
  ASSERT_TRUE(c.curve.has_value());
  EXPECT_EQ(c.curve->kind, deltaloop::CurveKind::ellipse);
  EXPECT_DOUBLE_EQ(c.curve->semi_major, 3.0);
  EXPECT_EQ(c.curve->sample_density, 500u);
}

TEST(Run, TransverseExample) {
  auto c = from_text("[run]\nkind = transverse\n[params]\na = 1\nbeta = 10\nvariant = plus\n");
  c.out = scratch("transverse");
  std::ostringstream log;
  const auto r = run(c, log);
  EXPECT_EQ(r.flagged, 0u);
  const auto lines = lines_of(c.out / "transverse.csv");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0].rfind("# units:", 0), 0u);
  EXPECT_EQ(lines[1], "a,beta,gamma_plus,variant,zeta,k,residual,lower_bound,upper_bound,certified,violated");
  EXPECT_NE(lines[2].find(",plus,-24.995"), std::string::npos);
  EXPECT_NE(lines[2].find(",true,"), std::string::npos);
  EXPECT_TRUE(fs::exists(c.out / "manifest.csv"));
}

TEST(Run, FlaggedRowsNameTheViolatedHypothesis) {
  auto c = from_text("[run]\nkind = transverse\n[params]\na = 0.26\nbeta = 10\nvariant = plus\n");
  c.out = scratch("flagged");
  std::ostringstream log;
  const auto r = run(c, log);
  EXPECT_EQ(r.flagged, 1u);
  const auto lines = lines_of(c.out / "transverse.csv");
  EXPECT_NE(lines[2].find(",false,beta*a <= 8/3"), std::string::npos);
}

TEST(Run, CountExample) {
  auto c = from_text("[run]\nkind = count\n[curve]\nkind = circle\nradius = 1\n[params]\nbeta = 100\n");
  c.out = scratch("count");
  std::ostringstream log;
  run(c, log);
  const auto lines = lines_of(c.out / "counts.csv");
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[1], "beta,count_lower,count_upper,L_beta_over_2pi");
  std::istringstream row(lines[2]);
  std::string beta, lo, hi, lb;
  std::getline(row, beta, ',');
  std::getline(row, lo, ',');
  std::getline(row, hi, ',');
  std::getline(row, lb, ',');
  EXPECT_EQ(beta, "100");
  EXPECT_NEAR(std::stod(lb), 100.0, 1e-9);
  EXPECT_LE(std::stoi(lo), 100);
  EXPECT_GE(std::stoi(hi), 100);
}

TEST(Run, OutputsAreByteIdentical) {
  const std::string text =
      "[run]\nkind = bracket\nworkers = 3\n[curve]\nkind = ellipse\n[params]\nbetas = 60, 90, 120\nn = 3\n";
  auto c1 = from_text(text);
  auto c2 = from_text(text);
  c1.out = scratch("det1");
  c2.out = scratch("det2");
  std::ostringstream log;
  const auto r1 = run(c1, log);
  const auto r2 = run(c2, log);
  ASSERT_EQ(r1.files.size(), r2.files.size());
  for (std::size_t i = 0; i < r1.files.size(); ++i) {
    EXPECT_EQ(r1.files[i].filename(), r2.files[i].filename());
    EXPECT_EQ(slurp(r1.files[i]), slurp(r2.files[i])) << r1.files[i];
  }
}

TEST(Run, GeometryAndSpectrumOutputs) {
  auto g = from_text("[run]\nkind = geometry\n[curve]\nkind = circle\n[sampling]\ndensity = 400\n");
  g.out = scratch("geometry");
  std::ostringstream log;
  run(g, log);
  const auto curv = lines_of(g.out / "curvature.csv");
  EXPECT_EQ(curv[1], "s,gamma,dgamma,ddgamma");
  EXPECT_EQ(curv.size(), 402u);

  auto s = from_text("[run]\nkind = spectrum-1d\n[curve]\nkind = circle\n[grid]\nn1d = 512\n[params]\nn = 5\n");
  s.out = scratch("spectrum");
  run(s, log);
  const auto spec = lines_of(s.out / "spectrum_S.csv");
  EXPECT_EQ(spec[1], "j,mu,err_est");
  EXPECT_EQ(spec.size(), 7u);
}

TEST(Binary, ExitCodes) {
  const auto dir = scratch("binary");
  fs::create_directories(dir);
  const auto log = dir / "log.txt";

  EXPECT_EQ(run_binary("no-such-kind", log), 2);
  const std::string msg = slurp(log);
  for (const auto& k : kind_names()) EXPECT_NE(msg.find(k), std::string::npos) << k;

  {
    std::ofstream f(dir / "bad.ini");
    f << "[run]\nkind = transverse\n[params]\na = one\n";
  }
  EXPECT_EQ(run_binary("--config " + (dir / "bad.ini").string(), log), 2);
  EXPECT_NE(slurp(log).find("bad.ini:4"), std::string::npos);

  {
    std::ofstream f(dir / "ok.ini");
    f << "[run]\nkind = transverse\n[params]\na = 1\nbeta = 10\n";
  }
  EXPECT_EQ(run_binary("--config " + (dir / "ok.ini").string() + " --out " + (dir / "out").string(), log), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "transverse.csv"));

  // Flags win over the file.
  EXPECT_EQ(run_binary("--config " + (dir / "ok.ini").string() + " --out " + (dir / "out2").string() +
                           " --beta-list 10,20",
                       log),
            0);
  EXPECT_EQ(lines_of(dir / "out2" / "transverse.csv").size(), 6u);

  EXPECT_EQ(run_binary("--workers", log), 2);
}
