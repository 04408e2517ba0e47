#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "noise_logic/verification_protocol.hpp"
#include "test_stats.hpp"

using namespace noise_logic;

namespace {

BitString random_bits(std::size_t n, std::mt19937_64& gen) {
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = gen() & 1;
  return BitString(std::move(v));
}

// Exhaustive oracle for the per-slot acceptance of one protocol slot: sum
// over every value assignment of the 2N reference slots (weighted by p) and
// over Alice's spike surviving or not (weighted by loss).
double enumerate_slot_acceptance(const BitString& a, const BitString& b, double p, double loss) {
  const std::size_t n = a.size();
  double agree = 0;
  for (unsigned mask = 0; mask < (1u << (2 * n)); ++mask) {
    double w = 1;
    for (std::size_t k = 0; k < 2 * n; ++k) w *= (mask >> k & 1) ? p : 1 - p;
    bool xa = false, xb = false;
    for (std::size_t i = 0; i < n; ++i) {
      xa ^= (mask >> (2 * i + a[i])) & 1;
      xb ^= (mask >> (2 * i + b[i])) & 1;
    }
    if (!xa) agree += xb ? 0 : w;
    else agree += w * (xb ? 1 - loss : loss);
  }
  return agree;
}

}  // namespace

TEST(BitString, ParseAndValidate) {
  EXPECT_EQ(BitString::parse("1010").to_string(), "1010");
  EXPECT_THROW(BitString::parse(""), DomainError);
  EXPECT_THROW(BitString::parse("10a"), DomainError);
  EXPECT_EQ(hamming_distance(BitString::parse("1100"), BitString::parse("1010")), 2u);
  EXPECT_THROW(hamming_distance(BitString::parse("1"), BitString::parse("10")), LengthMismatch);
}

TEST(ReferenceBank, SizeAndDeterminism) {
  const ClockConfig clock{64, 0.5, 77};
  EXPECT_EQ(make_reference_bank(1, clock).trains().size(), 2u);
  const auto alice = make_reference_bank(6, clock), bob = make_reference_bank(6, clock);
  EXPECT_EQ(alice.trains(), bob.trains());
  EXPECT_THROW(make_reference_bank(0, clock), DomainError);
}

TEST(ReferenceBank, IndependentFairTrains) {
  const std::size_t n = 10000;
  const auto bank = make_reference_bank(4, {n, 0.5, 3});
  const auto& trains = bank.trains();
  ASSERT_EQ(trains.size(), 8u);
  for (std::size_t i = 0; i < trains.size(); ++i) {
    EXPECT_TRUE(test_stats::within_3sigma_count(trains[i].spike_count(), n, 0.5));
    for (std::size_t j = i + 1; j < trains.size(); ++j) {
      std::size_t agree = 0;
      for (std::size_t t = 0; t < n; ++t) agree += trains[i][t] == trains[j][t];
      EXPECT_TRUE(test_stats::within_3sigma_count(agree, n, 0.5)) << i << "," << j;
    }
  }
}

TEST(HyperspaceSignal, SingleBitSelectsTrain) {
  const auto bank = make_reference_bank(1, {100, 0.5, 1});
  EXPECT_EQ(hyperspace_signal(bank, BitString::parse("1")).signal, bank.train(0, 1));
  EXPECT_EQ(hyperspace_signal(bank, BitString::parse("0")).signal, bank.train(0, 0));
}

TEST(HyperspaceSignal, EqualStringsGiveEqualSignals) {
  const auto bank = make_reference_bank(8, {300, 0.5, 2});
  const auto s = BitString::parse("10110010");
  EXPECT_EQ(hyperspace_signal(bank, s, Engine::direct, Party::Alice).signal,
            hyperspace_signal(bank, s, Engine::direct, Party::Bob).signal);
  EXPECT_THROW(hyperspace_signal(bank, BitString::parse("101")), LengthMismatch);
}

TEST(HyperspaceSignal, EnginesAgree) {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + gen() % 8;
    const auto bank = make_reference_bank(n, {500, 0.5, gen()});
    const auto s = random_bits(n, gen);
    EXPECT_EQ(hyperspace_signal(bank, s, Engine::direct).signal,
              hyperspace_signal(bank, s, Engine::neural_circuit).signal);
  }
}

TEST(Transmit, IdealAndTotalLoss) {
  const auto bank = make_reference_bank(3, {200, 0.5, 8});
  const auto sig = hyperspace_signal(bank, BitString::parse("011"));
  EXPECT_EQ(transmit(sig, {0.0}).signal, sig.signal);
  EXPECT_EQ(transmit(sig, {1.0}).signal.spike_count(), 0u);
  EXPECT_THROW(transmit(sig, {1.5}), DomainError);
}

TEST(Transmit, LossIsBinomialAndOneSided) {
  SpikeTrain alternating(10000);
  for (std::size_t t = 0; t < 10000; t += 2) alternating.set(t, true);
  const HyperspaceSignal sig{alternating, Party::Alice, {10000, 0.5, 13}};
  const auto out = transmit(sig, {0.1}, 4);
  EXPECT_TRUE(test_stats::within_3sigma_count(out.signal.spike_count(), 5000, 0.9));
  for (std::size_t t = 1; t < 10000; t += 2) EXPECT_FALSE(out.signal[t]);
  EXPECT_EQ(transmit(sig, {0.1}, 4).signal, out.signal);
}

TEST(AgreementProbability, Values) {
  EXPECT_EQ(per_step_agreement_probability(0.3, 0), 1.0);
  EXPECT_EQ(per_step_agreement_probability(0.5, 1), 0.5);
  EXPECT_EQ(per_step_agreement_probability(0.5, 17), 0.5);
  EXPECT_THROW(per_step_agreement_probability(-0.5, 1), DomainError);
}

TEST(AgreementProbability, EnumerationOfFourReferenceSlots) {
  // Strings differing in 2 positions: the 4 involved reference slots decide
  // agreement (shared positions cancel).
  double agree = 0;
  const double p = 0.25;
  for (unsigned m = 0; m < 16; ++m) {
    double w = 1;
    for (int k = 0; k < 4; ++k) w *= (m >> k & 1) ? p : 1 - p;
    const bool alice = (m & 1) ^ (m >> 1 & 1);
    const bool bob = (m >> 2 & 1) ^ (m >> 3 & 1);
    if (alice == bob) agree += w;
  }
  EXPECT_DOUBLE_EQ(agree, 0.53125);
  EXPECT_DOUBLE_EQ(per_step_agreement_probability(0.25, 2), agree);
}

TEST(ErrorBound, Values) {
  EXPECT_EQ(error_bound(83, 0.5, 1), std::ldexp(1.0, -83));
  EXPECT_EQ(error_bound(83, 0.5, 9), std::ldexp(1.0, -83));
  EXPECT_EQ(error_bound(1, 0.5, 1), 0.5);
  EXPECT_NEAR(error_bound(8, 0.25, 1), 0.023283064365386963, 1e-17);
  EXPECT_THROW(error_bound(8, 0.5, 0), DomainError);
  EXPECT_THROW(error_bound(0, 0.5, 1), DomainError);
}

TEST(ErrorBound, MatchesMonteCarloAtQuarterRate) {
  const auto est = monte_carlo_false_accept(4, 8, 0.25, 1, 100000, 555);
  EXPECT_TRUE(test_stats::within_3sigma_rate(est.rate, 1e5, error_bound(8, 0.25, 1))) << est.rate;
}

TEST(PredictedAcceptance, MatchesExhaustiveEnumeration) {
  std::mt19937_64 gen(10);
  for (std::size_t n = 1; n <= 4; ++n)
    for (std::size_t d = 0; d <= n; ++d)
      for (double p : {0.0, 0.2, 0.5, 0.9})
        for (double loss : {0.0, 0.3, 1.0}) {
          const auto a = random_bits(n, gen);
          std::vector<std::uint8_t> bv(n);
          for (std::size_t i = 0; i < n; ++i) bv[i] = a[i] ^ (i < d);
          const BitString b(std::move(bv));
          const double slot = enumerate_slot_acceptance(a, b, p, loss);
          EXPECT_NEAR(predicted_acceptance(n, 1, p, d, loss), slot, 1e-14);
          EXPECT_NEAR(predicted_acceptance(n, 3, p, d, loss), slot * slot * slot, 1e-14);
        }
}

TEST(PredictedAcceptance, ReducesToErrorBound) {
  for (std::size_t n : {1u, 8u, 64u})
    for (std::size_t d = 1; d <= std::min<std::size_t>(n, 5); ++d)
      for (double p : {0.1, 0.25, 0.5})
        EXPECT_NEAR(predicted_acceptance(n, 7, p, d, 0.0), error_bound(7, p, d), 1e-15);
}

TEST(Verify, CompletenessProperty) {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + gen() % 40, steps = 1 + gen() % 100;
    const auto bank = make_reference_bank(n, {steps, std::uniform_real_distribution<>(0, 1)(gen), gen()});
    const auto s = random_bits(n, gen);
    const auto r = verify(s, s, bank, steps, {0.0});
    EXPECT_EQ(r.verdict, Decision::Accept);
    EXPECT_EQ(r.steps_compared, steps);
    EXPECT_FALSE(r.first_mismatch_step.has_value());
  }
}

TEST(Verify, ReportsWorstCaseBound) {
  const auto bank = make_reference_bank(32, {83, 0.5, 5});
  const auto s = BitString::parse(std::string(32, '1'));
  const auto r = verify(s, s, bank, 83, {0.0});
  EXPECT_EQ(r.analytic_false_accept_bound, std::ldexp(1.0, -83));
}

TEST(Verify, Errors) {
  const auto bank = make_reference_bank(2, {10, 0.5, 5});
  EXPECT_THROW(verify(BitString::parse("10"), BitString::parse("10"), bank, 11, {0.0}), DomainError);
  EXPECT_THROW(verify(BitString::parse("10"), BitString::parse("101"), bank, 5, {0.0}),
               LengthMismatch);
  EXPECT_THROW(verify(BitString::parse("101"), BitString::parse("101"), bank, 5, {0.0}),
               LengthMismatch);
}

TEST(Verify, RejectionStepIsGeometricHalf) {
  const std::size_t trials = 20000;
  std::size_t at0 = 0, at1 = 0;
  double sum = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    MonteCarloParams mp{16, 64, 0.5, 1, 0.0, 1, 99, 1};
    const auto r = run_trial(mp, t);
    ASSERT_EQ(r.verdict, Decision::Reject);
    const auto step = *r.first_mismatch_step;
    ASSERT_LT(step, 64u);
    at0 += step == 0;
    at1 += step == 1;
    sum += static_cast<double>(step);
  }
  EXPECT_TRUE(test_stats::within_3sigma_count(at0, trials, 0.5));
  EXPECT_TRUE(test_stats::within_3sigma_count(at1, trials, 0.25));
  // Failures before first success of a fair coin: mean 1, variance 2.
  EXPECT_NEAR(sum / trials, 1.0, 3 * std::sqrt(2.0 / trials));
}

TEST(MonteCarlo, EqualStringsAlwaysAccept) {
  const auto est = monte_carlo_false_accept(16, 12, 0.5, 0, 2000, 3);
  EXPECT_EQ(est.accepts, 2000u);
  EXPECT_EQ(est.rate, 1.0);
}

TEST(MonteCarlo, SoundnessGrid) {
  std::uint64_t seed = 100;
  for (double p : {0.25, 0.5})
    for (std::size_t d : {1u, 2u, 5u})
      for (std::size_t steps : {1u, 4u, 8u, 12u}) {
        const std::uint64_t trials = 50000;
        const auto est = monte_carlo_false_accept(8, steps, p, d, trials, seed++);
        EXPECT_TRUE(test_stats::within_3sigma_rate(est.rate, trials, error_bound(steps, p, d)))
            << "p=" << p << " d=" << d << " M=" << steps << " rate=" << est.rate;
      }
}

TEST(MonteCarlo, LossyFalseRejectLaw) {
  MonteCarloParams mp{8, 5, 0.5, 0, 0.3, 50000, 17, 0};
  const auto est = monte_carlo_false_accept(mp);
  const double reject = 1.0 - std::pow(1.0 - 0.3 / 2, 5);
  EXPECT_TRUE(test_stats::within_3sigma_rate(1.0 - est.rate, 50000, reject)) << est.rate;
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResult) {
  MonteCarloParams mp{6, 4, 0.5, 2, 0.1, 3001, 42, 1};
  const auto one = monte_carlo_false_accept(mp);
  mp.threads = 4;
  const auto four = monte_carlo_false_accept(mp);
  EXPECT_EQ(one.accepts, four.accepts);
}

TEST(MonteCarlo, Validation) {
  EXPECT_THROW(monte_carlo_false_accept(4, 8, 0.5, 5, 10, 1), DomainError);
  EXPECT_THROW(monte_carlo_false_accept(4, 8, 0.5, 1, 0, 1), DomainError);
  EXPECT_THROW(monte_carlo_false_accept(4, 0, 0.5, 1, 10, 1), DomainError);
}

TEST(Summarize, WilsonInterval) {
  // Reference values from statsmodels proportion_confint(method="wilson", alpha=0.01).
  auto e = summarize(50, 100);
  EXPECT_NEAR(e.ci_low, 0.3752796250448398, 1e-12);
  EXPECT_NEAR(e.ci_high, 0.6247203749551602, 1e-12);
  EXPECT_NEAR(e.stderr_, 0.05, 1e-15);
  e = summarize(3, 1000);
  EXPECT_NEAR(e.ci_low, 0.0007581012310614674, 1e-12);
  EXPECT_NEAR(e.ci_high, 0.011793516682924922, 1e-12);
  e = summarize(0, 10);
  EXPECT_EQ(e.ci_low, 0.0);
  EXPECT_NEAR(e.ci_high, 0.3988540933049082, 1e-12);
}

TEST(Sweep, CsvLayout) {
  SweepRow row{{8, 4, 0.5, 1, 0.0, 100, 1, 0}, summarize(7, 100), 0.0625};
  std::ostringstream os;
  write_sweep_csv_header(os);
  write_sweep_csv_row(os, row);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "N,M,p,d,loss,trials,accepts,rate,stderr,ci_low,ci_high,analytic");
  EXPECT_EQ(text.substr(text.find('\n') + 1, 24), "8,4,0.5,1,0,100,7,0.07,0");
  EXPECT_EQ(sweep_row_to_json(row).size(), 12u);
}
