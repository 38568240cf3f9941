#include "rgg/continuum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>

#include "rgg/quadrature.hpp"

namespace rgg {

namespace {

// Rationalize v as a/b with b <= max_den and a/b == v exactly in double.
bool rationalize(double v, long long max_den, long long* a, long long* b) {
  double x = v;
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(x);
    if (fl > 9e17) return false;
    const long long ai = static_cast<long long>(fl);
    const long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den || q2 <= 0) return false;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (q1 != 0 && static_cast<double>(p1) / static_cast<double>(q1) == v) {
      *a = p1;
      *b = q1;
      return true;
    }
    const double frac = x - fl;
    if (frac < 1e-18) return false;
    x = 1.0 / frac;
  }
  return false;
}

struct HeapNode {
  double value;
  long long num;  // exact numerator when the rational path is active
  std::vector<int> k;
};

struct NodeGreater {
  bool exact;
  bool operator()(const HeapNode& a, const HeapNode& b) const {
    if (exact) {
      if (a.num != b.num) return a.num > b.num;
    } else if (a.value != b.value) {
      return a.value > b.value;
    }
    return a.k > b.k;  // deterministic tie-break
  }
};

}  // namespace

ContinuumSpectrum enumerate_spectrum(const SigmaDiag& sigma, int count) {
  if (count < 1) throw InvalidArgument("enumerate_spectrum: need count >= 1");
  const int d = sigma.dim();

  // exact path: per-axis step 2/sigma_i^2 as a rational with a shared
  // denominator small enough for overflow-free int64 numerators
  std::vector<long long> num(d, 0), den(d, 1);
  bool exact = true;
  long long denom = 1;
  for (int i = 0; i < d && exact; ++i) {
    if (!rationalize(2.0 / sigma.sigma_sq[i], 1 << 20, &num[i], &den[i])) {
      exact = false;
      break;
    }
    const long long g = std::gcd(denom, den[i]);
    if (denom > (1LL << 40) / (den[i] / g)) {
      exact = false;
      break;
    }
    denom = denom / g * den[i];
  }
  std::vector<long long> step_num(d, 0);
  if (exact)
    for (int i = 0; i < d; ++i) {
      step_num[i] = num[i] * (denom / den[i]);
      if (std::abs(step_num[i]) > (1LL << 50)) exact = false;
    }

  NodeGreater cmp{exact};
  std::priority_queue<HeapNode, std::vector<HeapNode>, NodeGreater> heap(cmp);
  heap.push({0.0, 0, std::vector<int>(d, 0)});

  ContinuumSpectrum out{.values = {}, .groups = {}, .sigma = sigma, .exact = exact,
                        .group_of = {}};
  const double tol_scale = 1e-12;
  long long group_num = 0;
  int popped = 0;

  auto same_group = [&](const HeapNode& n) {
    if (out.groups.empty()) return false;
    if (exact) return n.num == group_num;
    const double ref = out.groups.back().value;
    return std::abs(n.value - ref) <= tol_scale * std::max(1.0, std::abs(ref));
  };

  while (!heap.empty()) {
    HeapNode node = heap.top();
    heap.pop();
    // stop once `count` values are out and the current group is complete
    if (popped >= count && !same_group(node)) break;

    if (!same_group(node)) {
      out.groups.push_back({node.value, 0, {}});
      group_num = node.num;
    }
    ContinuumSpectrum::Group& grp = out.groups.back();
    grp.multiplicity += 1;
    grp.indices.push_back(node.k);
    if (popped < count) {
      out.values.push_back(node.value);
      out.group_of.push_back(static_cast<int>(out.groups.size()) - 1);
    }
    ++popped;

    // canonical-predecessor rule: k+e_i is generated exactly once, from the
    // node whose first nonzero axis is >= i
    int first_nonzero = d;
    for (int i = 0; i < d; ++i)
      if (node.k[i] > 0) {
        first_nonzero = i;
        break;
      }
    for (int i = 0; i <= std::min(first_nonzero, d - 1); ++i) {
      HeapNode child = node;
      child.k[i] += 1;
      child.num = node.num + (exact ? step_num[i] : 0);
      child.value = exact ? static_cast<double>(child.num) / denom
                          : node.value + 2.0 / sigma.sigma_sq[i];
      heap.push(std::move(child));
    }
  }
  return out;
}

std::string spectrum_csv(const ContinuumSpectrum& spec) {
  std::ostringstream os;
  os << "j,value,group,k_tuple\n";
  char buf[64];
  int j = 0;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const auto& grp = spec.groups[g];
    for (const auto& k : grp.indices) {
      if (j >= static_cast<int>(spec.values.size())) break;
      std::snprintf(buf, sizeof buf, "%.17g", spec.values[j]);
      os << (j + 1) << ',' << buf << ',' << g << ',';
      for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) os << ';';
        os << k[i];
      }
      os << '\n';
      ++j;
    }
  }
  return os.str();
}

double f_norm(const std::function<double(std::span<const double>)>& f,
              const SigmaDiag& sigma, int quad_order) {
  const int d = sigma.dim();
  if (d > 3) throw InvalidArgument("f_norm: d <= 3 supported");
  double jac = 1.0;
  for (int i = 0; i < d; ++i) jac *= sigma.sigma(i);

  auto eval = [&](int order) {
    const QuadRule& gh = gauss_hermite(order);
    const int n = order;
    std::vector<double> x(d, 0.0);
    double acc = 0.0;
    std::vector<int> idx(d, 0);
    for (;;) {
      double w = 1.0;
      for (int i = 0; i < d; ++i) {
        x[i] = sigma.sigma(i) * gh.nodes[idx[i]];
        w *= gh.weights[idx[i]];
      }
      const double v = f(std::span<const double>(x.data(), d));
      acc += w * v * v;
      int axis = 0;
      while (axis < d) {
        if (++idx[axis] < n) break;
        idx[axis] = 0;
        ++axis;
      }
      if (axis == d) break;
    }
    return jac * acc;
  };

  double prev = eval(quad_order);
  for (int order = 2 * quad_order; order <= 8 * quad_order; order *= 2) {
    const double cur = eval(order);
    if (std::abs(cur - prev) <= 1e-10 * std::max(std::abs(cur), 1e-300))
      return std::sqrt(std::max(cur, 0.0));
    prev = cur;
  }
  return std::sqrt(std::max(prev, 0.0));
}

}  // namespace rgg
