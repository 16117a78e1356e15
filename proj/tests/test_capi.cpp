#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <numbers>
#include <string>

#include "ionkick/ionkick.h"

namespace {

struct Ctx {
  ik_context* p = ik_context_create();
  ~Ctx() { ik_context_destroy(p); }
};

constexpr const char* minimal =
    R"({"schema_version": 1, "experiment": "validate"})";

}  // namespace

TEST_CASE("c api validates configs and reports hashes") {
  Ctx ctx;
  REQUIRE(ctx.p != nullptr);
  char hash[17] = {0};
  CHECK(ik_validate_config(ctx.p, minimal, nullptr, 0, hash, sizeof hash) ==
        IK_OK);
  CHECK(std::strlen(hash) == 16);
  CHECK(std::string(ik_last_error(ctx.p)).empty());

  CHECK(ik_validate_config(ctx.p, "{]", nullptr, 0, nullptr, 0) ==
        IK_ERR_CONFIG);
  CHECK(!std::string(ik_last_error(ctx.p)).empty());
  CHECK(ik_validate_config(ctx.p, nullptr, nullptr, 0, nullptr, 0) ==
        IK_ERR_CONFIG);

  const char* bad_override[] = {"bogus_key=1"};
  CHECK(ik_validate_config(ctx.p, minimal, bad_override, 1, nullptr, 0) ==
        IK_ERR_CONFIG);
}

TEST_CASE("c api example config is itself valid") {
  Ctx ctx;
  CHECK(ik_validate_config(ctx.p, ik_example_config(), nullptr, 0, nullptr, 0) ==
        IK_OK);
}

TEST_CASE("c api runs the validate experiment end to end") {
  Ctx ctx;
  char summary[256] = {0};
  CHECK(ik_run_config(ctx.p, minimal, nullptr, 0, nullptr, 0, summary,
                      sizeof summary) == IK_OK);
  CHECK(std::string(summary).find("config ok") == 0);

  CHECK(ik_run_file(ctx.p, "/nonexistent/config.json", nullptr, 0, nullptr, 0,
                    nullptr, 0) == IK_ERR_IO);
}

TEST_CASE("c api writes experiment artifacts") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ionkick_capi_out";
  fs::remove_all(dir);
  Ctx ctx;
  const char* ov[] = {"experiment=gate-solve", "gate.n=1",
                      "output.basename=capi"};
  char summary[256] = {0};
  REQUIRE(ik_run_config(ctx.p, minimal, ov, 3, dir.string().c_str(), 2, summary,
                        sizeof summary) == IK_OK);
  CHECK(fs::exists(dir / "capi_gate.json"));
  CHECK(fs::exists(dir / "capi_manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("c api cumulative fidelity matches the factored form") {
  const double eps = 2.5e-5;
  const double x = 10 * eps;
  CHECK(ik_cumulative_fidelity(eps, 10) ==
        doctest::Approx((1.0 - x) * (1.0 - x)).epsilon(1e-14));
}

TEST_CASE("c api sequence handles solve and report") {
  Ctx ctx;
  const double omega = 2.0 * std::numbers::pi * 1e6;
  ik_sequence* seq = ik_sequence_solve(ctx.p, "gzc", 1, omega, 0.3, nullptr);
  REQUIRE(seq != nullptr);
  double rep[IK_REP_COUNT];
  REQUIRE(ik_sequence_report(ctx.p, seq, rep) == IK_OK);
  CHECK(rep[IK_REP_RESIDUAL] < 1e-12);
  CHECK(rep[IK_REP_PHASE] ==
        doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-10));
  CHECK(rep[IK_REP_PULSE_PAIRS] == 14.0);
  CHECK(rep[IK_REP_TAU1] < rep[IK_REP_TAU2]);
  CHECK(rep[IK_REP_GATE_TIME] == doctest::Approx(2.0 * rep[IK_REP_TAU3]));

  // seeded re-solve lands on the same branch
  const double seed[3] = {rep[IK_REP_TAU1], rep[IK_REP_TAU2], rep[IK_REP_TAU3]};
  ik_sequence* seq2 = ik_sequence_solve(ctx.p, "gzc", 1, omega, 0.3, seed);
  REQUIRE(seq2 != nullptr);
  double rep2[IK_REP_COUNT];
  REQUIRE(ik_sequence_report(ctx.p, seq2, rep2) == IK_OK);
  CHECK(rep2[IK_REP_TAU3] == doctest::Approx(rep[IK_REP_TAU3]));
  ik_sequence_destroy(seq2);
  ik_sequence_destroy(seq);

  CHECK(ik_sequence_solve(ctx.p, "nope", 1, omega, 0.3, nullptr) == nullptr);
  CHECK(!std::string(ik_last_error(ctx.p)).empty());
  CHECK(ik_sequence_report(ctx.p, nullptr, rep) == IK_ERR_CONFIG);
}

TEST_CASE("c api bessel sidebands are symmetric up to alternating signs") {
  Ctx ctx;
  double out[9];
  REQUIRE(ik_bessel_sidebands(ctx.p, 1.2, 4, out) == IK_OK);
  for (int n = 1; n <= 4; ++n) {
    const double ratio = (n & 1) ? -1.0 : 1.0;
    CHECK(out[4 - n] == doctest::Approx(ratio * out[4 + n]));
  }
  CHECK(ik_bessel_sidebands(ctx.p, 1.2, -1, out) == IK_ERR_CONFIG);
}
