#include "rgg/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "rgg/parallel.hpp"

namespace rgg {

double SparseAffinity::min_degree() const {
  double m = degrees.empty() ? 0.0 : degrees[0];
  for (double d : degrees) m = std::min(m, d);
  return m;
}

namespace {

struct CellIndex {
  // occupied cells only; exact packed key for d <= 3, ordered map otherwise
  std::unordered_map<std::uint64_t, std::vector<int>> packed;
  std::map<std::vector<int>, std::vector<int>> generic;
  bool use_packed = false;
  int d = 0;

  // cell coordinates are >= -1 (a neighbor probe of cell 0) and bounded by
  // the spread guard in neighbor_pairs, so 21 bits per axis suffice
  static std::uint64_t pack(std::span<const int> c) {
    std::uint64_t key = 0;
    for (int v : c) key = (key << 21) | static_cast<std::uint64_t>(v + 1);
    return key;
  }

  const std::vector<int>* find(std::span<const int> c) const {
    if (use_packed) {
      auto it = packed.find(pack(c));
      return it == packed.end() ? nullptr : &it->second;
    }
    auto it = generic.find(std::vector<int>(c.begin(), c.end()));
    return it == generic.end() ? nullptr : &it->second;
  }
};

std::vector<int> cell_of(std::span<const double> x, std::span<const double> mins,
                         double side) {
  std::vector<int> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    c[i] = static_cast<int>(std::floor((x[i] - mins[i]) / side));
  return c;
}

// all offsets in {-1,0,1}^d that are lexicographically positive
void positive_offsets(int d, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(d, -1);
  for (;;) {
    bool positive = false;
    for (int i = 0; i < d; ++i) {
      if (cur[i] > 0) { positive = true; break; }
      if (cur[i] < 0) break;
    }
    if (positive) out.push_back(cur);
    int axis = d - 1;
    while (axis >= 0) {
      if (++cur[axis] <= 1) break;
      cur[axis] = -1;
      --axis;
    }
    if (axis < 0) break;
  }
}

}  // namespace

std::vector<std::pair<int, int>> neighbor_pairs(const PointCloud& cloud, double r_n,
                                                const MetricOrder& p,
                                                unsigned threads) {
  if (!(r_n > 0.0)) throw InvalidArgument("neighbor_pairs: need r_n > 0");
  const int n = cloud.n();
  const int d = cloud.dim();

  std::vector<double> mins(d, 0.0), maxs(d, 0.0);
  for (int i = 0; i < d; ++i) {
    mins[i] = cloud.points.col(i).minCoeff();
    maxs[i] = cloud.points.col(i).maxCoeff();
  }
  // guard against degenerate cell counts when r_n dwarfs the spread
  double side = r_n;
  for (int i = 0; i < d; ++i)
    if ((maxs[i] - mins[i]) / side > 1.0e6)
      throw InvalidArgument("neighbor_pairs: cell grid too fine for the data spread");

  CellIndex index;
  index.d = d;
  index.use_packed = d <= 3;
  std::vector<std::vector<int>> cells(n);
  for (int j = 0; j < n; ++j) {
    cells[j] = cell_of(cloud.row(j), mins, side);
    if (index.use_packed)
      index.packed[CellIndex::pack(cells[j])].push_back(j);
    else
      index.generic[cells[j]].push_back(j);
  }

  std::vector<const std::vector<int>*> buckets;
  std::vector<std::vector<int>> bucket_cells;
  if (index.use_packed) {
    for (auto& [key, pts] : index.packed) {
      bucket_cells.push_back(cells[pts.front()]);
      buckets.push_back(&pts);
    }
  } else {
    for (auto& [cell, pts] : index.generic) {
      bucket_cells.push_back(cell);
      buckets.push_back(&pts);
    }
  }

  std::vector<std::vector<int>> offsets;
  positive_offsets(d, offsets);

  const unsigned nt = std::max(1u, threads);
  std::vector<std::vector<std::pair<int, int>>> found(nt);
  std::atomic<std::size_t> cursor{0};
  auto work = [&](std::size_t tid) {
    std::vector<int> neighbor(d);
    auto& out = found[tid];
    for (;;) {
      const std::size_t b = cursor.fetch_add(1);
      if (b >= buckets.size()) return;
      const std::vector<int>& pts = *buckets[b];
      const std::vector<int>& cell = bucket_cells[b];
      // within-cell pairs
      for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t c = a + 1; c < pts.size(); ++c) {
          const int i = std::min(pts[a], pts[c]), j = std::max(pts[a], pts[c]);
          if (lp_distance(cloud.row(i), cloud.row(j), p) <= r_n) out.push_back({i, j});
        }
      // pairs against lexicographically-positive neighbor cells
      for (const auto& off : offsets) {
        for (int i = 0; i < d; ++i) neighbor[i] = cell[i] + off[i];
        const std::vector<int>* other = index.find(neighbor);
        if (!other) continue;
        for (int a : pts)
          for (int c : *other) {
            const int i = std::min(a, c), j = std::max(a, c);
            if (lp_distance(cloud.row(i), cloud.row(j), p) <= r_n)
              out.push_back({i, j});
          }
      }
    }
  };
  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }

  std::vector<std::pair<int, int>> pairs;
  std::size_t total = 0;
  for (const auto& f : found) total += f.size();
  pairs.reserve(total);
  for (auto& f : found) pairs.insert(pairs.end(), f.begin(), f.end());
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

namespace {

SparseAffinity assemble(int n, const std::vector<std::pair<int, int>>& pairs,
                        const std::vector<double>& pair_w,
                        const std::vector<double>& diag_w, SparseAffinity::Kind kind,
                        double tau) {
  SparseAffinity a;
  a.n = n;
  a.kind = kind;
  a.tau = tau;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < n; ++i)
    if (diag_w[i] != 0.0) counts[i] += 1;
  for (const auto& [i, j] : pairs) {
    counts[i] += 1;
    counts[j] += 1;
  }
  a.row_ptr.assign(n + 1, 0);
  for (int i = 0; i < n; ++i) a.row_ptr[i + 1] = a.row_ptr[i] + counts[i];
  a.col.resize(a.row_ptr[n]);
  a.val.resize(a.row_ptr[n]);
  std::vector<int> fill(a.row_ptr.begin(), a.row_ptr.end() - 1);
  for (int i = 0; i < n; ++i)
    if (diag_w[i] != 0.0) {
      a.col[fill[i]] = i;
      a.val[fill[i]] = diag_w[i];
      ++fill[i];
    }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    const double w = pair_w[k];
    a.col[fill[i]] = j;
    a.val[fill[i]] = w;
    ++fill[i];
    a.col[fill[j]] = i;
    a.val[fill[j]] = w;
    ++fill[j];
  }
  // sort each row by column for merge-based consumers
  for (int i = 0; i < n; ++i) {
    const int lo = a.row_ptr[i], hi = a.row_ptr[i + 1];
    std::vector<std::pair<int, double>> row;
    row.reserve(hi - lo);
    for (int k = lo; k < hi; ++k) row.push_back({a.col[k], a.val[k]});
    std::sort(row.begin(), row.end());
    for (int k = lo; k < hi; ++k) {
      a.col[k] = row[k - lo].first;
      a.val[k] = row[k - lo].second;
    }
  }
  a.degrees.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) a.degrees[i] += a.val[k];
  const double mind = a.min_degree();
  a.drop_bound = (kind == SparseAffinity::Kind::Smoothed && mind > 0.0)
                     ? n * tau / mind
                     : 0.0;
  return a;
}

}  // namespace

SparseAffinity build_hard_affinity(const PointCloud& cloud, const GraphSpec& spec,
                                   unsigned threads) {
  if (spec.alpha_n)
    throw InvalidArgument("build_hard_affinity: spec.alpha_n must be unset");
  if (!(spec.r_n > 0.0)) throw InvalidArgument("build_hard_affinity: need r_n > 0");
  const int n = cloud.n();
  const auto pairs = neighbor_pairs(cloud, spec.r_n, spec.p, threads);
  std::vector<double> w(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double dist =
        lp_distance(cloud.row(pairs[k].first), cloud.row(pairs[k].second), spec.p);
    w[k] = spec.g.g(dist / spec.r_n);
  }
  std::vector<double> diag(n, spec.g.g(0.0));  // self distance 0 <= r_n
  return assemble(n, pairs, w, diag, SparseAffinity::Kind::Hard, 0.0);
}

namespace {
double clamped_sigmoid(double t) {
  t = std::clamp(t, -700.0, 700.0);
  return 1.0 / (1.0 + std::exp(-t));
}
}  // namespace

SparseAffinity build_smoothed_affinity(const PointCloud& cloud, const GraphSpec& spec,
                                       unsigned threads) {
  if (!spec.alpha_n)
    throw InvalidArgument("build_smoothed_affinity: spec.alpha_n must be set");
  if (!(spec.r_n > 0.0)) throw InvalidArgument("build_smoothed_affinity: need r_n > 0");
  const double alpha = *spec.alpha_n;
  const double r2 = spec.r_n * spec.r_n;
  const double sup = spec.g.sup_g_star();
  const int n = cloud.n();
  const int d = cloud.dim();

  // candidate radius: beyond it every weight falls under tau
  double r_eff = std::sqrt(r2 + std::log(std::max(sup / spec.tau, 2.0)) / alpha);
  // the search radius need not exceed the data diameter (l1 dominates lp)
  double diam = 0.0;
  for (int i = 0; i < d; ++i)
    diam += cloud.points.col(i).maxCoeff() - cloud.points.col(i).minCoeff();
  r_eff = std::min(r_eff, std::max(diam, spec.r_n));

  const auto pairs = neighbor_pairs(cloud, r_eff, spec.p, threads);
  std::vector<std::pair<int, int>> kept;
  std::vector<double> w;
  kept.reserve(pairs.size());
  w.reserve(pairs.size());
  for (const auto& [i, j] : pairs) {
    const double dist = lp_distance(cloud.row(i), cloud.row(j), spec.p);
    const double weight =
        clamped_sigmoid(alpha * (r2 - dist * dist)) * spec.g.g_star(dist / spec.r_n);
    if (weight >= spec.tau) {
      kept.push_back({i, j});
      w.push_back(weight);
    }
  }
  const double self = clamped_sigmoid(alpha * r2) * spec.g.g_star(0.0);
  std::vector<double> diag(n, self >= spec.tau ? self : 0.0);
  return assemble(n, kept, w, diag, SparseAffinity::Kind::Smoothed, spec.tau);
}

LaplacianOperator::LaplacianOperator(SparseAffinity affinity, double scale)
    : affinity_(std::make_shared<SparseAffinity>(std::move(affinity))), scale_(scale) {
  if (!(scale > 0.0)) throw InvalidArgument("LaplacianOperator: need scale > 0");
  const int n = affinity_->n;
  inv_deg_.resize(n);
  inv_sqrt_deg_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double d = affinity_->degrees[i];
    if (!(d > 0.0))
      throw ZeroDegree("LaplacianOperator: zero degree at row " + std::to_string(i) +
                       "; lower the drop threshold");
    inv_deg_[i] = 1.0 / d;
    inv_sqrt_deg_[i] = 1.0 / std::sqrt(d);
  }
}

void LaplacianOperator::apply_rw(std::span<const double> x, std::span<double> y) const {
  const auto& a = *affinity_;
  for (int i = 0; i < a.n; ++i) {
    double acc = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      acc += a.val[k] * x[a.col[k]];
    y[i] = x[i] - inv_deg_[i] * acc;
  }
}

void LaplacianOperator::apply_sym(std::span<const double> x, std::span<double> y) const {
  const auto& a = *affinity_;
  for (int i = 0; i < a.n; ++i) {
    double acc = 0.0;
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      acc += a.val[k] * inv_sqrt_deg_[a.col[k]] * x[a.col[k]];
    y[i] = inv_sqrt_deg_[i] * acc;
  }
}

double matrix_closeness_check(const LaplacianOperator& hard,
                              const LaplacianOperator& smoothed) {
  const auto& a = hard.affinity();
  const auto& b = smoothed.affinity();
  if (a.n != b.n) throw InvalidArgument("matrix_closeness_check: size mismatch");
  if (std::abs(hard.scale() - smoothed.scale()) >
      1e-12 * std::max(hard.scale(), smoothed.scale()))
    throw InvalidArgument("matrix_closeness_check: scales differ");
  double max_row = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double row = 0.0;
    int ka = a.row_ptr[i], kb = b.row_ptr[i];
    const double da = 1.0 / a.degrees[i], db = 1.0 / b.degrees[i];
    while (ka < a.row_ptr[i + 1] || kb < b.row_ptr[i + 1]) {
      const int ca = ka < a.row_ptr[i + 1] ? a.col[ka] : a.n;
      const int cb = kb < b.row_ptr[i + 1] ? b.col[kb] : b.n;
      if (ca < cb) {
        row += std::abs(a.val[ka] * da);
        ++ka;
      } else if (cb < ca) {
        row += std::abs(b.val[kb] * db);
        ++kb;
      } else {
        row += std::abs(a.val[ka] * da - b.val[kb] * db);
        ++ka;
        ++kb;
      }
    }
    max_row = std::max(max_row, row);
  }
  return hard.scale() * std::sqrt(static_cast<double>(a.n)) * max_row;
}

std::vector<int> connected_components(const SparseAffinity& a) {
  std::vector<int> parent(a.n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) {
      const int ri = find(i), rj = find(a.col[k]);
      if (ri != rj) parent[ri] = rj;
    }
  std::vector<int> label(a.n, -1);
  int next = 0;
  for (int i = 0; i < a.n; ++i) {
    const int r = find(i);
    if (label[r] < 0) label[r] = next++;
    label[i] = label[r];
  }
  return label;
}

int component_count(const SparseAffinity& a) {
  const auto labels = connected_components(a);
  int m = 0;
  for (int l : labels) m = std::max(m, l + 1);
  return m;
}

std::string to_matrix_market(const SparseAffinity& a) {
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::size_t lower = 0;
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col[k] <= i) ++lower;
  os << a.n << ' ' << a.n << ' ' << lower << '\n';
  char buf[64];
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
      if (a.col[k] <= i) {
        std::snprintf(buf, sizeof buf, "%.17g", a.val[k]);
        os << (i + 1) << ' ' << (a.col[k] + 1) << ' ' << buf << '\n';
      }
  return os.str();
}

}  // namespace rgg
