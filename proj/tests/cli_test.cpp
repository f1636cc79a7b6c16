#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ebundle/cli.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace ebundle;
using namespace ebundle::testing;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(EBUNDLE_FIXTURES) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string out = ::testing::TempDir() + "ebundle_cli_out.txt";
  const std::string cmd = std::string(EBUNDLE_BIN) + " " + args + " > " + out + " 2>/dev/null";
  int raw = std::system(cmd.c_str());
  std::ifstream in(out);
  std::ostringstream os;
  os << in.rdbuf();
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, os.str()};
}

std::string fixture_path(const std::string& name) { return std::string(EBUNDLE_FIXTURES) + "/" + name; }

JobDescription job_of(const DirectSumPresentation& P) {
  JobDescription j;
  j.p = P.curve->field()->characteristic();
  j.ext = P.curve->field()->absolute_degree();
  j.curve = P.curve;
  j.mark = P.mark;
  j.kind = JobKind::DirectSum;
  j.summands = P.summands;
  return j;
}

JobDescription job_of(const KernelPresentation& K) {
  JobDescription j;
  j.p = K.curve->field()->characteristic();
  j.curve = K.curve;
  j.mark = K.mark;
  j.kind = JobKind::Kernel;
  j.ambient = K.ambient;
  j.target = K.target;
  j.g = K.g;
  return j;
}

JobDescription job_of(const MonadPresentation& M) {
  JobDescription j = job_of(M.kernel);
  j.kind = JobKind::Monad;
  for (int a = 0; a < M.kernel.m(); ++a) {
    FunctionVector row;
    for (const auto& col : M.f) row.push_back(col[a]);
    j.f_rows.push_back(row);
  }
  return j;
}

/// A direct sum over F_{p^2}, so that printed coefficients involve t.
JobDescription extension_job(Word p, std::mt19937_64& rng) {
  auto F = extend(Field::prime(p), 2);
  CurvePtr E;
  for (;;) {
    try {
      E = make_curve(Curve(F, F->random(rng), F->random(rng)));
      break;
    } catch (const InvalidInput&) {
    }
  }
  DirectSumPresentation P{E, random_point(*E, rng), {}};
  for (int j = 0; j < 2; ++j) P.summands.push_back(disguised_class(E, random_point(*E, rng), P.mark, rng));
  JobDescription job = job_of(P);
  job.twist = Divisor::of(place_of(*E, P.mark));
  return job;
}

}  // namespace

TEST(Parse, RankOneDirectSum) {
  auto job = parse_job("curve p=5 a=-1 b=0\nmark inf\nsummand 1*(0,0) - 1*inf\n");
  EXPECT_EQ(job.kind, JobKind::DirectSum);
  EXPECT_EQ(job.p, 5u);
  EXPECT_TRUE(job.mark.inf);
  ASSERT_EQ(job.summands.size(), 1u);
  EXPECT_EQ(job.summands[0].degree(), 0);
  EXPECT_EQ(direct_sum_of(job).rank(), 1);
}

TEST(Parse, MalformedDivisorHasPosition) {
  try {
    parse_job("curve p=5 a=-1 b=0\nmark inf\nsummand 2*(0 0)\n");
    FAIL() << "no ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 14);
    EXPECT_EQ(e.expected(), "','");
  }
}

TEST(Parse, ErrorsCarryPositions) {
  auto at = [](const std::string& text) -> std::pair<int, int> {
    try {
      parse_job(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  EXPECT_EQ(at("curve p=5 a=1 b=1\nsumand 0\n"), std::make_pair(2, 1));
  EXPECT_EQ(at("curve p=5 a=1 b=1\n\n# c\ng x+, 1\n"), std::make_pair(4, 5));
  EXPECT_EQ(at("curve p=5 a=1 b=z\n"), std::make_pair(1, 17));
  EXPECT_EQ(at("mark inf\n"), std::make_pair(1, 1));
  EXPECT_EQ(at("curve p=5 a=1 b=1\nsummand 1*(0,1) 1*inf\n"), std::make_pair(2, 17));
}

TEST(Parse, SemanticErrorsAreNotParseErrors) {
  // Off-curve point and a monad whose composite is nonzero.
  EXPECT_THROW(parse_job("curve p=5 a=-1 b=0\nsummand 1*(1,1) - 1*inf\n"), InvalidInput);
  std::string text = fixture("monad.job");
  text.replace(text.find("f 1\n"), 4, "f 2\n");
  JobDescription job;
  ASSERT_NO_THROW(job = parse_job(text));
  try {
    monad_of(job);
    FAIL() << "accepted g o f != 0";
  } catch (const ParseError&) {
    FAIL() << "semantic failure reported as ParseError";
  } catch (const InvalidInput&) {
  }
}

TEST(Parse, ExpressionsAndClosedPlaces) {
  auto job = parse_job("curve p=5 a=-1 b=0\nmark inf\n");
  auto f = parse_function(job.curve, "(x^2 - 1)/(x - 1) - y^-1*y");
  EXPECT_EQ(f, CurveFunction::x(job.curve));
  // x^2 + 2 is inert here, so the place has degree 4.
  auto D = parse_divisor(job.curve, "1*{x^2+2} - 2*inf");
  EXPECT_EQ(D.degree(), 2);
  EXPECT_EQ(parse_divisor(job.curve, D.to_string()), D);
  EXPECT_TRUE(parse_divisor(job.curve, "0").is_zero());
  EXPECT_THROW(parse_divisor(job.curve, "1*{x^2+1}"), InvalidInput);
}

TEST(Parse, PrintParseRoundTrip) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 10; ++i) {
    auto a = job_of(random_direct_sum(std::vector<Word>{5, 7, 11}[i % 3], 1 + i % 3, rng).P);
    auto b = job_of(random_kernel(5, 3, rng));
    auto c = job_of(random_monad(7, 1 + i % 2, 1 + i % 2, rng).M);
    auto d = extension_job(5, rng);
    for (const auto& job : {a, b, c, d}) {
      auto back = parse_job(print_job(job));
      EXPECT_TRUE(back == job) << print_job(job);
      EXPECT_EQ(print_job(back), print_job(job));
    }
  }
}

TEST(Report, JsonRoundTrip) {
  for (const char* name : {"fully_split.job", "unstable.job", "f2_kernel.job", "monad.job"}) {
    Report r = cmd_analyze(parse_job(fixture(name)));
    EXPECT_EQ(report_from_json(report_json(r)), r) << name;
  }
  auto job = parse_job(fixture("fully_split.job"));
  Report g = cmd_analyze(job, parse_divisor(job.curve, "1*inf + 1*(1,0) + 1*(4,0)"));
  ASSERT_TRUE(g.general_twist);
  EXPECT_EQ(report_from_json(report_json(g)), g);
}

TEST(Report, EchoesMarkAndFixtureFacts) {
  Report fs = cmd_analyze(parse_job(fixture("fully_split.job")));
  EXPECT_TRUE(fs.fully_split);
  EXPECT_EQ(fs.mark, "inf");
  EXPECT_EQ(exit_code(fs), 0);

  Report un = cmd_analyze(parse_job(fixture("unstable.job")));
  EXPECT_EQ(un.verdict, "NotSemistable");
  EXPECT_EQ(un.reason, "TopWedgeVanishes");
  EXPECT_EQ(exit_code(un), 2);

  auto job = parse_job(fixture("monad.job"));
  Report mo = cmd_analyze(job);
  ASSERT_TRUE(mo.monad);
  EXPECT_EQ(mo.mark, "(1,0)");
  const Divisor shift = parse_divisor(job.curve, mo.monad->difference);
  EXPECT_EQ(shift, Divisor::of(place_of(*job.curve, job.mark), mo.monad->s));

  Report f2 = cmd_analyze(parse_job(fixture("f2_kernel.job")));
  EXPECT_EQ(splitting_shape(f2), "2");
  EXPECT_FALSE(f2.fully_split);
  EXPECT_FALSE(f2.test_fully_split);
}

TEST(Report, GeneralTwistOnDirectSum) {
  auto job = parse_job(fixture("fully_split.job"));
  Report r = cmd_analyze(job, parse_divisor(job.curve, "1*inf + 1*(1,0) + 1*(4,0)"));
  ASSERT_TRUE(r.general_twist);
  EXPECT_EQ(r.general_twist->dim_g, r.rank);
  EXPECT_EQ(r.general_twist->spectral, r.spectral);
  EXPECT_EQ(r.twist, "1*inf");
}

TEST(Binary, ExitCodesFollowVerdict) {
  EXPECT_EQ(run("analyze " + fixture_path("fully_split.job")).status, 0);
  EXPECT_EQ(run("analyze " + fixture_path("f2_kernel.job")).status, 0);
  auto un = run("analyze --json " + fixture_path("unstable.job"));
  EXPECT_EQ(un.status, 2);
  auto j = nlohmann::json::parse(un.out);
  EXPECT_EQ(j["reason"], "TopWedgeVanishes");
  EXPECT_EQ(j["mark"], "inf");
  EXPECT_EQ(run("spectral " + fixture_path("unstable.job")).status, 2);
}

TEST(Binary, ErrorsExitOneWithReason) {
  auto missing = run("analyze --json " + fixture_path("does_not_exist.job"));
  EXPECT_EQ(missing.status, 1);
  EXPECT_EQ(nlohmann::json::parse(missing.out)["error"], "InvalidInput");
  const std::string bad = ::testing::TempDir() + "ebundle_bad.job";
  std::ofstream(bad) << "curve p=5 a=-1 b=0\nsummand 2*(0 0)\n";
  auto parse = run("analyze --json " + bad);
  EXPECT_EQ(parse.status, 1);
  auto j = nlohmann::json::parse(parse.out);
  EXPECT_EQ(j["error"], "ParseError");
  EXPECT_NE(j["message"].get<std::string>().find("line 2, column 14"), std::string::npos);
}

TEST(Binary, RiemannRochBasis) {
  auto r = run("rr --json " + fixture_path("rr.job"));
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["dimension"], j["degree"]);
  auto job = parse_job(fixture("rr.job"));
  for (const auto& f : j["basis"]) EXPECT_TRUE(in_riemann_roch(parse_function(job.curve, f.get<std::string>()), *job.divisor));
}

TEST(Binary, AnalyzeJsonMatchesLibrary) {
  auto r = run("analyze --json " + fixture_path("monad.job"));
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(report_from_json(r.out), cmd_analyze(parse_job(fixture("monad.job"))));
}

TEST(Sweep, SlotParsing) {
  EXPECT_EQ(parse_slot("c=0..4").values.size(), 5u);
  EXPECT_EQ(parse_slot("c=1,t,2*t").values, (std::vector<std::string>{"1", "t", "2*t"}));
  EXPECT_THROW(parse_slot("c"), ParseError);
  EXPECT_THROW(parse_slot("c=4..1"), ParseError);
}

TEST(Sweep, OneSlotOverF5) {
  auto res = cmd_sweep(fixture("sweep_rank2.job"), {parse_slot("b=0..4")}, 2);
  EXPECT_LE(res.rows.size(), 5u);
  for (std::size_t i = 0; i < res.rows.size(); ++i) EXPECT_EQ(res.rows[i].index, static_cast<int>(i));
}

TEST(Sweep, AllRowsDegenerate) {
  auto res = cmd_sweep(fixture("sweep_degenerate.job"), {parse_slot("c=0..3")}, 2);
  EXPECT_EQ(res.rows.size(), 4u);
  EXPECT_EQ(res.skipped, 4);
  EXPECT_TRUE(res.verdicts.empty());
  EXPECT_TRUE(res.shapes.empty());
}

TEST(Sweep, RankTwoShowsBothSplittingTypes) {
  const std::string tpl = fixture("sweep_rank2.job");
  auto res = cmd_sweep(tpl, {parse_slot("b=0..4")}, 3);
  std::map<std::string, int> shapes(res.shapes.begin(), res.shapes.end());
  EXPECT_GE(shapes["1+1"], 1);
  EXPECT_GE(shapes["2"], 1);
  // Verify every F_2 row independently: one kernel direction at a double point.
  for (const auto& row : res.rows) {
    if (!row.report || splitting_shape(*row.report) != "2") continue;
    std::string text = tpl;
    text.replace(text.find("{b}"), 3, row.values[0]);
    auto job = parse_job(text);
    auto S = section_system(job, job.effective_twist());
    auto rep = splitting_type(S);
    ASSERT_EQ(rep.points.size(), 1u);
    const auto& pa = rep.points[0];
    EXPECT_EQ(pa.multiplicity, 2);
    EXPECT_LT(kernel_dimension(S, place_of(*rep.split_curve, pa.point)).d, pa.multiplicity);
  }
}

TEST(Sweep, OrderIndependentOfThreads) {
  const std::string tpl = fixture("sweep_rank2.job");
  std::vector<Slot> slots{parse_slot("b=0..4"), parse_slot("z=0,1")};
  EXPECT_EQ(sweep_json(cmd_sweep(tpl, slots, 1)), sweep_json(cmd_sweep(tpl, slots, 4)));
}
