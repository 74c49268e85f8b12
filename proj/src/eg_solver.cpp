#include "cfm/eg_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "cfm/error.hpp"

namespace cfm {

using Eigen::LDLT;
using Eigen::LLT;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iter: return "max_iter";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::degenerate_tight: return "degenerate_tight";
  }
  return "unknown";
}

namespace {

constexpr double kStepFraction = 0.995;
constexpr double kNeighborhood = 1e-3;
constexpr double kCentrality = 1e-6;
constexpr std::size_t kMaxPolish = 30;
constexpr double kLinearTol = 1e-6;

// One type constraint of one agent.
struct Row {
  std::size_t agent;
  std::size_t type;
  bool equality;
};

struct AgentRows {
  std::vector<std::size_t> rows;  // indices into the global row list
};

struct State {
  MatrixXd x;      // n x m
  MatrixXd sigma;  // n x m, multipliers of x >= 0
  VectorXd p;      // m
  VectorXd r;      // per row
  VectorXd z;      // per row, slack (0 on equality rows)
};

struct Direction {
  MatrixXd dx, dsigma;
  VectorXd dp, dr, dz;
};

struct Residuals {
  MatrixXd rd;    // stationarity
  VectorXd rcap;  // capacity
  VectorXd rrow;  // type rows
  double mu = 0.0;
  double stat = 0.0, prim = 0.0, comp = 0.0;
};

class Solver {
 public:
  Solver(const MarketInstance& inst, std::span<const double> lambda, const SolveOptions& opts)
      : inst_(inst), opts_(opts), n_(inst.n_agents()), m_(inst.n_goods()) {
    c_.resize(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) c_[idx(i)] = inst.budget(i) + lambda[i];
    u_.resize(idx(n_), idx(m_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) u_(idx(i), idx(j)) = inst.utility(i, j);
    cap_.resize(idx(m_));
    for (std::size_t j = 0; j < m_; ++j) cap_[idx(j)] = inst.capacity(j);

    agent_rows_.resize(n_);
    for (std::size_t t = 0; t < inst.n_types(); ++t) {
      const bool degenerate = is_degenerate_tight(inst, t);
      if (degenerate) degenerate_.push_back(t);
      bool pinned = false;
      for (std::size_t i = 0; i < n_; ++i) {
        if (!inst.participates(i, t)) continue;
        if (degenerate && !pinned) {
          // Implied by the capacity rows and the other agents' equalities.
          pinned = true;
          continue;
        }
        agent_rows_[i].rows.push_back(rows_.size());
        rows_.push_back({i, t, degenerate});
      }
    }
    n_ineq_ = static_cast<std::size_t>(
        std::count_if(rows_.begin(), rows_.end(), [](const Row& r) { return !r.equality; }));
  }

  // The iterates are driven to the central-path point with every
  // complementarity product equal to mu_floor = tol / 10 rather than to the
  // boundary. Where the optimal duals form a continuum this picks one of them
  // as a smooth function of the data.
  SolveResult run() {
    initialize();
    SolveResult out;
    out.stats.degenerate_types = degenerate_;
    const double mu_floor = 0.1 * opts_.tol;
    std::size_t it = 0, polish = 0;
    Residuals res = residuals(st_);
    bool converged = false;
    for (;;) {
      if (res.stat <= opts_.tol && res.prim <= opts_.tol && res.comp <= opts_.tol) {
        if (centrality(mu_floor) <= kCentrality || polish >= kMaxPolish) {
          converged = true;
          break;
        }
        ++polish;
      }
      if (it >= opts_.max_iter) break;
      ++it;
      if (!factorize()) break;

      MatrixXd tx;
      VectorXd tz = VectorXd::Zero(idx(rows_.size()));
      if (res.mu <= 10.0 * mu_floor) {
        tx = MatrixXd::Constant(idx(n_), idx(m_), mu_floor);
        for (std::size_t k = 0; k < rows_.size(); ++k)
          if (!rows_[k].equality) tz[idx(k)] = mu_floor;
      } else {
        tx = MatrixXd::Zero(idx(n_), idx(m_));
        Direction aff = direction(res, tx, tz);
        const double a_aff = step_length(aff);
        const double mu_aff = complementarity_mean(aff, a_aff);
        const double centering = std::min(std::pow(mu_aff / res.mu, 3), 1.0);
        const double target = std::max(centering * res.mu, mu_floor);
        tx = MatrixXd::Constant(idx(n_), idx(m_), target) - aff.dx.cwiseProduct(aff.dsigma);
        for (std::size_t k = 0; k < rows_.size(); ++k) {
          if (!rows_[k].equality) tz[idx(k)] = target - aff.dz[idx(k)] * aff.dr[idx(k)];
        }
      }
      Direction d = direction(res, tx, tz);
      apply(d, centered_step(d, step_length(d)));
      res = residuals(st_);
    }

    out.stats.iterations = it;
    out.stats.status = converged ? (degenerate_.empty() ? SolveStatus::converged
                                                        : SolveStatus::degenerate_tight)
                                 : SolveStatus::max_iter;
    extract(out);
    return out;
  }

  // max |product / mu - 1| over all complementarity pairs.
  double centrality(double mu) const {
    double worst = 0.0;
    for (Eigen::Index e = 0; e < st_.x.size(); ++e)
      worst = std::max(worst, std::abs(st_.x.data()[e] * st_.sigma.data()[e] / mu - 1.0));
    for (std::size_t k = 0; k < rows_.size(); ++k)
      if (!rows_[k].equality)
        worst = std::max(worst, std::abs(st_.r[idx(k)] * st_.z[idx(k)] / mu - 1.0));
    return worst;
  }

 private:
  static Eigen::Index idx(std::size_t k) { return static_cast<Eigen::Index>(k); }

  bool in_row(std::size_t k, std::size_t j) const {
    const TypeSet& goods = inst_.type(rows_[k].type);
    return std::find(goods.begin(), goods.end(), j) != goods.end();
  }

  void initialize() {
    st_.x.resize(idx(n_), idx(m_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        st_.x(idx(i), idx(j)) = cap_[idx(j)] / static_cast<double>(n_);

    for (const Row& row : rows_) {
      if (row.equality) continue;
      const TypeSet& goods = inst_.type(row.type);
      double sum = 0.0;
      for (std::size_t j : goods) sum += st_.x(idx(row.agent), idx(j));
      if (1.0 - sum >= 0.01) continue;
      const double k = static_cast<double>(goods.size());
      for (std::size_t j : goods) {
        double& v = st_.x(idx(row.agent), idx(j));
        v = 0.5 * v * (0.98 / sum) + 0.5 / (k + 1.0);
      }
    }

    // Price guess from the utility gradient at the starting point.
    MatrixXd g = gradient(st_.x);
    st_.p = g.colwise().mean().transpose();
    const double scale = std::max(st_.p.cwiseAbs().mean(), 1e-3);
    st_.r = VectorXd::Zero(idx(rows_.size()));
    st_.z = VectorXd::Zero(idx(rows_.size()));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (rows_[k].equality) continue;
      double sum = 0.0;
      for (std::size_t j : inst_.type(rows_[k].type)) sum += st_.x(idx(rows_[k].agent), idx(j));
      st_.z[idx(k)] = std::max(1.0 - sum, 1e-2);
      st_.r[idx(k)] = 0.1 * scale;
    }
    st_.sigma.resize(idx(n_), idx(m_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        st_.sigma(idx(i), idx(j)) =
            std::max(st_.p[idx(j)] - g(idx(i), idx(j)), 0.0) + 0.1 * scale;
  }

  VectorXd utilities(const MatrixXd& x) const { return u_.cwiseProduct(x).rowwise().sum(); }

  MatrixXd gradient(const MatrixXd& x) const {
    VectorXd U = utilities(x);
    MatrixXd g(idx(n_), idx(m_));
    for (std::size_t i = 0; i < n_; ++i) g.row(idx(i)) = u_.row(idx(i)) * (c_[idx(i)] / U[idx(i)]);
    return g;
  }

  Residuals residuals(const State& s) const {
    Residuals res;
    res.rd = gradient(s.x) + s.sigma;
    for (std::size_t i = 0; i < n_; ++i) res.rd.row(idx(i)) -= s.p.transpose();
    for (std::size_t k = 0; k < rows_.size(); ++k)
      for (std::size_t j : inst_.type(rows_[k].type))
        res.rd(idx(rows_[k].agent), idx(j)) -= s.r[idx(k)];
    res.rcap = cap_ - s.x.colwise().sum().transpose();
    res.rrow.resize(idx(rows_.size()));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      double sum = 0.0;
      for (std::size_t j : inst_.type(rows_[k].type)) sum += s.x(idx(rows_[k].agent), idx(j));
      res.rrow[idx(k)] = 1.0 - sum - s.z[idx(k)];
    }

    double comp_sum = s.x.cwiseProduct(s.sigma).sum();
    double comp_max = s.x.cwiseProduct(s.sigma).cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (rows_[k].equality) continue;
      const double v = s.r[idx(k)] * s.z[idx(k)];
      comp_sum += v;
      comp_max = std::max(comp_max, std::abs(v));
    }
    res.mu = comp_sum / static_cast<double>(n_ * m_ + n_ineq_);
    res.stat = res.rd.cwiseAbs().maxCoeff();
    res.prim = res.rcap.cwiseAbs().maxCoeff();
    if (res.rrow.size() > 0) res.prim = std::max(res.prim, res.rrow.cwiseAbs().maxCoeff());
    res.comp = comp_max;
    return res;
  }

  // Per-agent blocks: K = diag(sigma/x) + c u u^T / U^2, the agent's type
  // rows B and W = B K^-1 B^T + D; then the m x m Schur matrix on dp.
  bool factorize() {
    full_ready_ = false;
    const VectorXd U = utilities(st_.x);
    kinv_.assign(n_, MatrixXd());
    g_.assign(n_, MatrixXd());
    w_.assign(n_, LDLT<MatrixXd>());
    MatrixXd M = MatrixXd::Zero(idx(m_), idx(m_));
    for (std::size_t i = 0; i < n_; ++i) {
      const auto ii = idx(i);
      MatrixXd K = (st_.sigma.row(ii).array() / st_.x.row(ii).array()).matrix().asDiagonal();
      const VectorXd v = u_.row(ii).transpose() / U[ii];
      K.noalias() += c_[ii] * v * v.transpose();
      LLT<MatrixXd> llt(K);
      if (llt.info() != Eigen::Success) return false;
      kinv_[i] = llt.solve(MatrixXd::Identity(idx(m_), idx(m_)));
      MatrixXd S = kinv_[i];
      const auto& rows = agent_rows_[i].rows;
      if (!rows.empty()) {
        const MatrixXd B = type_rows(i);
        VectorXd D(idx(rows.size()));
        for (std::size_t a = 0; a < rows.size(); ++a) D[idx(a)] = row_weight(rows[a]);
        g_[i] = B * kinv_[i];
        MatrixXd W = g_[i] * B.transpose();
        W.diagonal() += D;
        w_[i].compute(W);
        if (w_[i].info() != Eigen::Success) return false;
        S.noalias() -= g_[i].transpose() * w_[i].solve(g_[i]);
      }
      M += S;
    }
    schur_.compute(M);
    return schur_.info() == Eigen::Success;
  }

  // Right-hand side of the reduced system
  //   K_i dx_i + dp + B_i^T dr_i = h_i,  sum_i dx_i = cap,  B_i dx_i - D_i dr_i = e_i.
  struct Reduced {
    MatrixXd h;
    VectorXd cap;
    std::vector<VectorXd> e;
  };

  MatrixXd type_rows(std::size_t i) const {
    const auto& rows = agent_rows_[i].rows;
    MatrixXd B = MatrixXd::Zero(idx(rows.size()), idx(m_));
    for (std::size_t a = 0; a < rows.size(); ++a)
      for (std::size_t j : inst_.type(rows_[rows[a]].type)) B(idx(a), idx(j)) = 1.0;
    return B;
  }

  double row_weight(std::size_t k) const {
    return rows_[k].equality ? 0.0 : st_.z[idx(k)] / st_.r[idx(k)];
  }

  // The unreduced system in (dx, dp, dr), factorized with pivoting. Used when
  // the block elimination loses accuracy near the boundary.
  bool factorize_full() const {
    if (full_ready_) return true;
    const VectorXd U = utilities(st_.x);
    const std::size_t nm = n_ * m_;
    std::vector<Eigen::Triplet<double>> tr;
    tr.reserve(n_ * m_ * (m_ + 2) + 4 * rows_.size() * m_);
    for (std::size_t i = 0; i < n_; ++i) {
      const auto ii = idx(i);
      const VectorXd v = u_.row(ii).transpose() / U[ii];
      for (std::size_t a = 0; a < m_; ++a) {
        const auto ra = idx(i * m_ + a);
        for (std::size_t b = 0; b < m_; ++b) {
          double val = c_[ii] * v[idx(a)] * v[idx(b)];
          if (a == b) val += st_.sigma(ii, idx(a)) / st_.x(ii, idx(a));
          tr.emplace_back(ra, idx(i * m_ + b), val);
        }
        tr.emplace_back(ra, idx(nm + a), 1.0);
        tr.emplace_back(idx(nm + a), ra, 1.0);
      }
    }
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const auto rk = idx(nm + m_ + k);
      for (std::size_t j : inst_.type(rows_[k].type)) {
        tr.emplace_back(idx(rows_[k].agent * m_ + j), rk, 1.0);
        tr.emplace_back(rk, idx(rows_[k].agent * m_ + j), 1.0);
      }
      tr.emplace_back(rk, rk, -row_weight(k));
    }
    const auto N = idx(nm + m_ + rows_.size());
    Eigen::SparseMatrix<double> A(N, N);
    A.setFromTriplets(tr.begin(), tr.end());
    if (!full_analyzed_) {
      full_lu_.analyzePattern(A);
      full_analyzed_ = true;
    }
    full_lu_.factorize(A);
    full_ready_ = full_lu_.info() == Eigen::Success;
    return full_ready_;
  }

  void solve_full(const Reduced& rhs, MatrixXd& dx, VectorXd& dp, VectorXd& dr) const {
    const std::size_t nm = n_ * m_;
    VectorXd b(idx(nm + m_ + rows_.size()));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) b[idx(i * m_ + j)] = rhs.h(idx(i), idx(j));
    b.segment(idx(nm), idx(m_)) = rhs.cap;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t q = 0; q < agent_rows_[i].rows.size(); ++q)
        b[idx(nm + m_ + agent_rows_[i].rows[q])] = rhs.e[i][idx(q)];
    const VectorXd sol = full_lu_.solve(b);
    dx.resize(idx(n_), idx(m_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j) dx(idx(i), idx(j)) = sol[idx(i * m_ + j)];
    dp = sol.segment(idx(nm), idx(m_));
    dr = sol.segment(idx(nm + m_), idx(rows_.size()));
  }

  static double max_abs(const Reduced& r) {
    double v = std::max(r.h.cwiseAbs().maxCoeff(), r.cap.cwiseAbs().maxCoeff());
    for (const VectorXd& e : r.e)
      if (e.size() > 0) v = std::max(v, e.cwiseAbs().maxCoeff());
    return v;
  }

  void solve_reduced(const Reduced& rhs, MatrixXd& dx, VectorXd& dp, VectorXd& dr) const {
    VectorXd acc = -rhs.cap;
    for (std::size_t i = 0; i < n_; ++i) {
      const VectorXd hi = rhs.h.row(idx(i)).transpose();
      VectorXd a = kinv_[i] * hi;
      if (!agent_rows_[i].rows.empty()) a -= g_[i].transpose() * w_[i].solve(g_[i] * hi - rhs.e[i]);
      acc += a;
    }
    dp = schur_.solve(acc);

    dx.resize(idx(n_), idx(m_));
    dr = VectorXd::Zero(idx(rows_.size()));
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& rows = agent_rows_[i].rows;
      VectorXd hi = rhs.h.row(idx(i)).transpose() - dp;
      if (!rows.empty()) {
        const VectorXd dri = w_[i].solve(g_[i] * hi - rhs.e[i]);
        for (std::size_t q = 0; q < rows.size(); ++q) {
          dr[idx(rows[q])] = dri[idx(q)];
          for (std::size_t j : inst_.type(rows_[rows[q]].type)) hi[idx(j)] -= dri[idx(q)];
        }
      }
      dx.row(idx(i)) = (kinv_[i] * hi).transpose();
    }
  }

  // Residual of the reduced system at (dx, dp, dr), formed without inverses.
  Reduced reduced_residual(const Reduced& rhs, const MatrixXd& dx, const VectorXd& dp,
                           const VectorXd& dr) const {
    const VectorXd U = utilities(st_.x);
    Reduced out{MatrixXd(idx(n_), idx(m_)), rhs.cap - dx.colwise().sum().transpose(),
                std::vector<VectorXd>(n_)};
    for (std::size_t i = 0; i < n_; ++i) {
      const auto ii = idx(i);
      const auto& rows = agent_rows_[i].rows;
      const VectorXd dxi = dx.row(ii).transpose();
      const VectorXd v = u_.row(ii).transpose() / U[ii];
      VectorXd kdx = (st_.sigma.row(ii).array() / st_.x.row(ii).array()).matrix().transpose()
                         .cwiseProduct(dxi) +
                     c_[ii] * v.dot(dxi) * v;
      VectorXd ri = rhs.h.row(ii).transpose() - kdx - dp;
      if (!rows.empty()) {
        const MatrixXd B = type_rows(i);
        VectorXd dri(idx(rows.size()));
        VectorXd D(idx(rows.size()));
        for (std::size_t q = 0; q < rows.size(); ++q) {
          dri[idx(q)] = dr[idx(rows[q])];
          D[idx(q)] = row_weight(rows[q]);
        }
        ri -= B.transpose() * dri;
        out.e[i] = rhs.e[i] - B * dxi + D.cwiseProduct(dri);
      }
      out.h.row(ii) = ri.transpose();
    }
    return out;
  }

  Direction direction(const Residuals& res, const MatrixXd& tx, const VectorXd& tz) const {
    Reduced rhs{res.rd + tx.cwiseQuotient(st_.x) - st_.sigma, res.rcap, std::vector<VectorXd>(n_)};
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& rows = agent_rows_[i].rows;
      rhs.e[i].resize(idx(rows.size()));
      for (std::size_t q = 0; q < rows.size(); ++q) {
        const std::size_t k = rows[q];
        rhs.e[i][idx(q)] = rows_[k].equality
                               ? res.rrow[idx(k)]
                               : res.rrow[idx(k)] - tz[idx(k)] / st_.r[idx(k)] + st_.z[idx(k)];
      }
    }

    Direction d;
    solve_reduced(rhs, d.dx, d.dp, d.dr);
    if (max_abs(reduced_residual(rhs, d.dx, d.dp, d.dr)) > kLinearTol * opts_.tol &&
        factorize_full()) {
      solve_full(rhs, d.dx, d.dp, d.dr);
    }

    d.dsigma = (tx - st_.sigma.cwiseProduct(st_.x) - st_.sigma.cwiseProduct(d.dx))
                   .cwiseQuotient(st_.x);
    d.dz = VectorXd::Zero(idx(rows_.size()));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (rows_[k].equality) continue;
      double ax = 0.0;
      for (std::size_t j : inst_.type(rows_[k].type)) ax += d.dx(idx(rows_[k].agent), idx(j));
      d.dz[idx(k)] = res.rrow[idx(k)] - ax;
    }
    return d;
  }

  static double max_step(const double* v, const double* dv, Eigen::Index len) {
    double a = 1.0;
    for (Eigen::Index k = 0; k < len; ++k)
      if (dv[k] < 0.0) a = std::min(a, -v[k] / dv[k]);
    return a;
  }

  double step_length(const Direction& d) const {
    double a = std::min(max_step(st_.x.data(), d.dx.data(), st_.x.size()),
                        max_step(st_.sigma.data(), d.dsigma.data(), st_.sigma.size()));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (rows_[k].equality) continue;
      const auto kk = idx(k);
      if (d.dz[kk] < 0.0) a = std::min(a, -st_.z[kk] / d.dz[kk]);
      if (d.dr[kk] < 0.0) a = std::min(a, -st_.r[kk] / d.dr[kk]);
    }
    return a;
  }

  double complementarity_mean(const Direction& d, double a) const {
    double sum = (st_.x + a * d.dx).cwiseProduct(st_.sigma + a * d.dsigma).sum();
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      if (rows_[k].equality) continue;
      const auto kk = idx(k);
      sum += (st_.z[kk] + a * d.dz[kk]) * (st_.r[kk] + a * d.dr[kk]);
    }
    return sum / static_cast<double>(n_ * m_ + n_ineq_);
  }

  // Largest step, up to the fraction-to-boundary rule, that keeps every
  // complementarity product at least kNeighborhood times their mean.
  double centered_step(const Direction& d, double a_max) const {
    double a = std::min(1.0, kStepFraction * a_max);
    for (int k = 0; k < 50; ++k) {
      double lo = std::numeric_limits<double>::infinity(), sum = 0.0;
      for (Eigen::Index e = 0; e < st_.x.size(); ++e) {
        const double v = (st_.x.data()[e] + a * d.dx.data()[e]) *
                         (st_.sigma.data()[e] + a * d.dsigma.data()[e]);
        lo = std::min(lo, v);
        sum += v;
      }
      for (std::size_t q = 0; q < rows_.size(); ++q) {
        if (rows_[q].equality) continue;
        const auto kk = idx(q);
        const double v = (st_.z[kk] + a * d.dz[kk]) * (st_.r[kk] + a * d.dr[kk]);
        lo = std::min(lo, v);
        sum += v;
      }
      if (lo >= kNeighborhood * sum / static_cast<double>(n_ * m_ + n_ineq_)) break;
      a *= 0.8;
    }
    return a;
  }

  void apply(const Direction& d, double a) {
    st_.x += a * d.dx;
    st_.sigma += a * d.dsigma;
    st_.p += a * d.dp;
    st_.r += a * d.dr;
    st_.z += a * d.dz;
  }

  void extract(SolveResult& out) const {
    const std::size_t T = inst_.n_types();
    out.x = Allocation(n_, m_);
    out.duals.s = Matrix(n_, m_);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        out.x(i, j) = st_.x(idx(i), idx(j));
        out.duals.s(i, j) = -st_.sigma(idx(i), idx(j));
      }
    }
    const VectorXd U = utilities(st_.x);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!(U[idx(i)] > 0.0) || !std::isfinite(U[idx(i)])) {
        throw Error(Errc::log_domain, "agent " + std::to_string(i + 1) + " has zero utility");
      }
    }
    out.duals.p.assign(st_.p.data(), st_.p.data() + m_);
    out.duals.r_raw = Matrix(n_, T);
    for (std::size_t k = 0; k < rows_.size(); ++k)
      out.duals.r_raw(rows_[k].agent, rows_[k].type) = st_.r[idx(k)];
    out.duals.r = out.duals.r_raw;
    out.duals.gauge_shift.assign(T, 0.0);
    for (std::size_t t : degenerate_) {
      double lo = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n_; ++i) lo = std::min(lo, out.duals.r(i, t));
      for (std::size_t i = 0; i < n_; ++i) out.duals.r(i, t) -= lo;
      for (std::size_t j : inst_.type(t)) out.duals.p[j] += lo;
      out.duals.gauge_shift[t] = lo;
    }
    for (std::size_t j = 0; j < m_; ++j)
      if (out.duals.p[j] < -opts_.tol) out.duals.negative_prices.push_back(j);

    double obj = 0.0;
    for (std::size_t i = 0; i < n_; ++i) obj += c_[idx(i)] * std::log(U[idx(i)]);
    out.duals.objective = obj;

    const Residuals res = residuals(st_);
    out.stats.stationarity_residual = res.stat;
    out.stats.primal_feasibility_residual = res.prim;
    out.stats.complementarity_residual = res.comp;
  }

  const MarketInstance& inst_;
  SolveOptions opts_;
  std::size_t n_, m_;
  VectorXd c_;
  MatrixXd u_;
  VectorXd cap_;
  std::vector<Row> rows_;
  std::vector<AgentRows> agent_rows_;
  std::vector<std::size_t> degenerate_;
  std::size_t n_ineq_ = 0;
  State st_;
  std::vector<MatrixXd> kinv_, g_;
  std::vector<LDLT<MatrixXd>> w_;
  LDLT<MatrixXd> schur_;
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>> full_lu_;
  mutable bool full_analyzed_ = false;
  mutable bool full_ready_ = false;
};

}  // namespace

SolveResult solve_bpsop(const MarketInstance& inst, std::span<const double> lambda,
                        const SolveOptions& opts) {
  if (lambda.size() != inst.n_agents()) {
    throw Error(Errc::dimension_mismatch, "expected " + std::to_string(inst.n_agents()) +
                                              " perturbations, got " +
                                              std::to_string(lambda.size()));
  }
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!std::isfinite(lambda[i]) || lambda[i] < 0.0) {
      throw Error(Errc::invalid_argument,
                  "perturbation of agent " + std::to_string(i + 1) + " must be finite and >= 0");
    }
  }
  if (!(opts.tol > 0.0)) throw Error(Errc::invalid_argument, "tolerance must be positive");

  const ValidationReport report = validate_instance(inst);
  for (const Issue& e : report.errors) {
    if (e.code != "type capacity infeasible") {
      throw Error(Errc::validation_failed, e.code + ": " + e.message);
    }
  }
  if (!report.errors.empty()) {
    SolveResult out;
    out.stats.status = SolveStatus::infeasible;
    out.stats.primal_feasibility_residual = std::numeric_limits<double>::infinity();
    return out;
  }
  return Solver(inst, lambda, opts).run();
}

SolveResult solve_sop1(const MarketInstance& inst, const SolveOptions& opts) {
  const std::vector<double> zero(inst.n_agents(), 0.0);
  return solve_bpsop(inst, zero, opts);
}

}  // namespace cfm
