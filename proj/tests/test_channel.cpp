// Copyright 2026 The ProxySel Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <string>
#include <vector>

#include <doctest.h>

#include "proxysel/channel.hpp"
#include "proxysel/errors.hpp"
#include "proxysel/ru_tree.hpp"

using namespace proxysel;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("synth_channels dimensions and determinism") {
  SynthChannelParams p;
  p.seed = 42;
  const ChannelSet a = synth_channels(p, 8, 16, 5);
  CHECK(a.n_antennas() == 8);
  CHECK(a.n_users() == 16);
  CHECK(a.n_subcarriers() == 26 * (1 << 4));
  CHECK_NOTHROW(a.validate());

  const ChannelSet b = synth_channels(p, 8, 16, 5);
  CHECK(a == b);

  p.seed = 43;
  const ChannelSet c = synth_channels(p, 8, 16, 5);
  CHECK_FALSE(a == c);
}

TEST_CASE("mean squared channel norm approaches the antenna count") {
  // Tap powers are normalized, so E[||h[n]||^2] = N_T per tone.
  SynthChannelParams p;
  p.seed = 7;
  const int nt = 4;
  // The tone average has few effective degrees of freedom per user (taps
  // are exponentially weighted), so a wide user population keeps the
  // estimator noise well under the 5% band.
  const ChannelSet cs = synth_channels(p, nt, 400, 5);
  double total = 0.0;
  for (int k = 0; k < cs.n_users(); ++k) {
    for (int n = 0; n < cs.n_subcarriers(); ++n) total += strength(cs, k, n);
  }
  const double mean = total / (cs.n_users() * cs.n_subcarriers());
  CHECK(mean == doctest::Approx(nt).epsilon(0.05));
}

TEST_CASE("per-user gains scale the average norm") {
  SynthChannelParams p;
  p.seed = 11;
  p.per_user_gain_db = std::vector<double>{0.0, -10.0};
  const ChannelSet cs = synth_channels(p, 8, 2, 4);
  double s0 = 0.0, s1 = 0.0;
  for (int n = 0; n < cs.n_subcarriers(); ++n) {
    s0 += strength(cs, 0, n);
    s1 += strength(cs, 1, n);
  }
  // 10 dB below: the ratio concentrates near 10 with many tones averaged.
  CHECK(s0 / s1 == doctest::Approx(10.0).epsilon(0.35));
}

TEST_CASE("single tap gives a frequency-flat channel") {
  SynthChannelParams p;
  p.n_taps = 1;
  p.seed = 3;
  const ChannelSet cs = synth_channels(p, 4, 2, 4);
  for (int k = 0; k < cs.n_users(); ++k) {
    const double first = strength(cs, k, 0);
    for (int n = 1; n < cs.n_subcarriers(); ++n) {
      CHECK(strength(cs, k, n) == doctest::Approx(first).epsilon(1e-12));
    }
  }
}

TEST_CASE("frequency response equals the explicit tap DFT") {
  // Reconstruct the taps from the first n_taps frequency samples is
  // ill-posed; instead check the response is a trigonometric polynomial of
  // degree n_taps-1: applying the (n_taps)-point annihilating difference
  // would be fragile, so compare two independent syntheses through the
  // one-tap flat case plus linearity of the DFT. Here: two taps produce a
  // response whose mean over the full band equals tap 0 (the oscillating
  // tap-1 term sums to zero over a full period).
  SynthChannelParams p;
  p.n_taps = 2;
  p.delay_spread_taps = 1.0;
  p.seed = 5;
  const ChannelSet cs = synth_channels(p, 2, 1, 4);
  const int f = cs.n_subcarriers();
  for (int a = 0; a < 2; ++a) {
    cplx mean = 0.0;
    for (int n = 0; n < f; ++n) mean += cs.h(n, 0)[a];
    mean /= static_cast<double>(f);
    // The tap-1 phasor e^{-2pi i n t/F} with t=1 sums to zero over n=0..F-1,
    // so the mean isolates tap 0. Verify against tone 0 minus the tone-F/2
    // half-period relation: h[0] + h[F/2] = 2 * tap0.
    const cplx tap0_twice = cs.h(0, 0)[a] + cs.h(f / 2, 0)[a];
    CHECK(std::abs(2.0 * mean - tap0_twice) < 1e-9);
  }
}

TEST_CASE("correlation is symmetric, bounded, and matches its definition") {
  SynthChannelParams p;
  p.seed = 9;
  const ChannelSet cs = synth_channels(p, 4, 6, 4);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      for (int n : {0, 17, 100}) {
        const double r = correlation(cs, i, j, n);
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
        CHECK(r == correlation(cs, j, i, n));
        cplx dot = 0.0;
        double ni = 0.0, nj = 0.0;
        for (int a = 0; a < 4; ++a) {
          dot += std::conj(cs.h(n, i)[a]) * cs.h(n, j)[a];
          ni += std::norm(cs.h(n, i)[a]);
          nj += std::norm(cs.h(n, j)[a]);
        }
        CHECK(r == doctest::Approx(std::abs(dot) / std::sqrt(ni * nj))
                       .epsilon(1e-12));
      }
    }
  }
  CHECK_THROWS_AS(correlation(cs, 2, 2, 0), DomainError);
}

TEST_CASE("correlation table matches avg_correlation on every ru") {
  SynthChannelParams p;
  p.seed = 13;
  const ChannelSet cs = synth_channels(p, 4, 5, 4);
  const RuTree tree = build_tree(4);
  const CorrelationTable table = build_correlation_table(cs, tree);
  CHECK(table.n_users() == 5);
  CHECK(table.ru_count() == tree.ru_count());
  for (int q = 1; q <= tree.ru_count(); ++q) {
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        if (i == j) continue;
        CHECK(table.avg(i, j, q) ==
              doctest::Approx(avg_correlation(cs, i, j, tree.ru(q)))
                  .epsilon(1e-12));
        CHECK(table.avg(i, j, q) == table.avg(j, i, q));
      }
    }
  }
}

TEST_CASE("strength table matches per-tone strengths") {
  SynthChannelParams p;
  p.seed = 17;
  const ChannelSet cs = synth_channels(p, 4, 3, 4);
  const StrengthTable st = build_strength_table(cs);
  for (int k = 0; k < 3; ++k) {
    for (int n = 0; n < cs.n_subcarriers(); ++n) {
      CHECK(st.at(k, n) == strength(cs, k, n));
    }
  }
}

TEST_CASE("channel files round-trip in both formats") {
  SynthChannelParams p;
  p.seed = 19;
  const ChannelSet cs = synth_channels(p, 4, 3, 4);

  const std::string bin = temp_path("proxysel_test_channels.bin");
  save_channels(cs, bin);
  CHECK(load_channels(bin) == cs);
  std::remove(bin.c_str());

  const std::string json = temp_path("proxysel_test_channels.json");
  save_channels(cs, json);
  CHECK(load_channels(json) == cs);
  std::remove(json.c_str());

  CHECK_THROWS_AS(load_channels(temp_path("proxysel_missing.bin")),
                  ParseError);
}

TEST_CASE("line-of-sight ray preserves the mean norm") {
  SynthChannelParams p;
  p.seed = 23;
  p.rician_k_db = 8.0;
  const int nt = 8;
  const ChannelSet cs = synth_channels(p, nt, 40, 5);
  double total = 0.0;
  for (int k = 0; k < cs.n_users(); ++k) {
    for (int n = 0; n < cs.n_subcarriers(); ++n) total += strength(cs, k, n);
  }
  const double mean = total / (cs.n_users() * cs.n_subcarriers());
  CHECK(mean == doctest::Approx(nt).epsilon(0.05));
}

TEST_CASE("line-of-sight ray spreads the correlation distribution") {
  // With i.i.d. Rayleigh fading the pairwise correlations concentrate near
  // 1/sqrt(N_T); a strong steering ray pushes beam-separated pairs toward
  // orthogonality, so the low quantiles drop well below that.
  SynthChannelParams base;
  base.seed = 29;
  SynthChannelParams los = base;
  los.rician_k_db = 8.0;
  const RuTree tree = build_tree(5);
  const ChannelSet cs_ray = synth_channels(base, 8, 24, 5);
  const ChannelSet cs_los = synth_channels(los, 8, 24, 5);
  auto quartile = [&](const ChannelSet& cs) {
    const CorrelationTable t = build_correlation_table(cs, tree);
    std::vector<double> v;
    for (int i = 0; i < 24; ++i) {
      for (int j = i + 1; j < 24; ++j) v.push_back(t.avg(i, j, 1));
    }
    std::sort(v.begin(), v.end());
    return v[v.size() / 4];
  };
  CHECK(quartile(cs_los) < 0.75 * quartile(cs_ray));
}

TEST_CASE("non-finite rician factor is rejected") {
  SynthChannelParams p;
  p.rician_k_db = std::nan("");
  CHECK_THROWS_AS(synth_channels(p, 4, 2, 4), DomainError);
}
