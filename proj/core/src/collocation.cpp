#include "pinnls/collocation.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "pinnls/errors.hpp"
#include "pinnls/random.hpp"

namespace pinnls {
namespace {

constexpr std::uint64_t kInteriorStream = 1;
constexpr std::uint64_t kBoundaryStream = 2;

void require_pinned_fit(const PointSet& pinned, std::size_t count, const char* what) {
  if (pinned.size() > count) {
    throw std::invalid_argument(std::string("more pinned ") + what + " points than points");
  }
}

}  // namespace

CollocationSet::CollocationSet(Domain domain, PointSet interior, PointSet boundary,
                               std::uint64_t seed, double gamma1, double gamma2,
                               std::size_t pinned_interior, std::size_t pinned_boundary)
    : domain_(domain),
      interior_(std::move(interior)),
      boundary_(std::move(boundary)),
      seed_(seed),
      gamma1_(gamma1),
      gamma2_(gamma2),
      pinned_interior_(pinned_interior),
      pinned_boundary_(pinned_boundary) {
  if (interior_.size() < 1 || boundary_.size() < 1) {
    throw std::invalid_argument("collocation set needs at least one interior and one boundary point");
  }
  if (interior_.dimension() != domain_.dimension() ||
      boundary_.dimension() != domain_.dimension()) {
    throw InputShapeError("collocation point dimension does not match the domain");
  }
  if (!(gamma1_ > 0.0) || !(gamma2_ > 0.0)) {
    throw std::invalid_argument("pairing exponents must be positive");
  }
  if (pinned_interior_ > interior_.size() || pinned_boundary_ > boundary_.size()) {
    throw std::invalid_argument("pinned counts exceed the point lists");
  }
  for (std::size_t i = 0; i < interior_.size(); ++i) {
    if (!domain_.contains(interior_[i])) throw DomainError("interior collocation point outside the domain");
  }
  for (std::size_t i = 0; i < boundary_.size(); ++i) {
    if (!domain_.on_boundary(boundary_[i])) throw DomainError("boundary collocation point off the boundary");
  }
}

double CollocationSet::interior_weight() const {
  return std::pow(static_cast<double>(interior_.size()), -gamma1_);
}

double CollocationSet::boundary_weight() const {
  return std::pow(static_cast<double>(boundary_.size()), -gamma2_);
}

CollocationSet sample(const Domain& domain, std::size_t n_interior, std::size_t n_boundary,
                      std::uint64_t seed, const CollocationOptions& options) {
  if (n_interior < 1 || n_boundary < 1) {
    throw std::invalid_argument("collocation counts must be at least 1");
  }
  const std::size_t d = domain.dimension();
  const bool has_pinned_int = !options.pinned_interior.empty();
  const bool has_pinned_bd = !options.pinned_boundary.empty();
  PointSet interior = has_pinned_int ? options.pinned_interior : PointSet(d);
  PointSet boundary = has_pinned_bd ? options.pinned_boundary : PointSet(d);
  require_pinned_fit(interior, n_interior, "interior");
  require_pinned_fit(boundary, n_boundary, "boundary");
  const std::size_t pinned_int = interior.size();
  const std::size_t pinned_bd = boundary.size();

  Rng rng_int(derive_seed(seed, kInteriorStream));
  Rng rng_bd(derive_seed(seed, kBoundaryStream));
  std::vector<double> x(d);
  interior.reserve(n_interior);
  while (interior.size() < n_interior) {
    domain.sample_interior(rng_int, x);
    interior.push_back(x);
  }
  boundary.reserve(n_boundary);
  while (boundary.size() < n_boundary) {
    domain.sample_boundary(rng_bd, x);
    boundary.push_back(x);
  }
  return CollocationSet(domain, std::move(interior), std::move(boundary), seed, options.gamma1,
                        options.gamma2, pinned_int, pinned_bd);
}

CollocationSet resample(const CollocationSet& pts, std::uint64_t epoch) {
  const std::size_t d = pts.domain().dimension();
  CollocationOptions options;
  options.gamma1 = pts.gamma1();
  options.gamma2 = pts.gamma2();
  options.pinned_interior = PointSet(d);
  for (std::size_t i = 0; i < pts.pinned_interior(); ++i) {
    options.pinned_interior.push_back(pts.interior()[i]);
  }
  options.pinned_boundary = PointSet(d);
  for (std::size_t i = 0; i < pts.pinned_boundary(); ++i) {
    options.pinned_boundary.push_back(pts.boundary()[i]);
  }
  return sample(pts.domain(), pts.interior().size(), pts.boundary().size(),
                pts.seed() ^ mix64(epoch), options);
}

double discrete_pairing(const ResidualPair& p, const ResidualPair& q,
                        const CollocationSet& pts) {
  double sum_int = 0.0;
  for (std::size_t i = 0; i < pts.interior().size(); ++i) {
    const auto x = pts.interior()[i];
    sum_int += p.interior(x) * q.interior(x);
  }
  double sum_bd = 0.0;
  for (std::size_t i = 0; i < pts.boundary().size(); ++i) {
    const auto x = pts.boundary()[i];
    sum_bd += p.boundary(x) * q.boundary(x);
  }
  return pts.interior_weight() * sum_int + pts.boundary_weight() * sum_bd;
}

double loss(const EllipticProblem& problem, const ShallowNetwork& net,
            const CollocationSet& pts) {
  const auto& lop = problem.interior_op();
  const auto& bop = problem.boundary_op();
  double sum_int = 0.0;
  for (std::size_t i = 0; i < pts.interior().size(); ++i) {
    const auto x = pts.interior()[i];
    const double r = lop.apply(net, x) - problem.source()(x);
    sum_int += r * r;
  }
  double sum_bd = 0.0;
  for (std::size_t i = 0; i < pts.boundary().size(); ++i) {
    const auto x = pts.boundary()[i];
    const double r = bop.apply(net, x) - problem.boundary_data()(x);
    sum_bd += r * r;
  }
  return pts.interior_weight() * sum_int + pts.boundary_weight() * sum_bd;
}

double loss_and_gradient(const EllipticProblem& problem, const ShallowNetwork& net,
                         const CollocationSet& pts, ParameterVector& grad) {
  const auto n_params = static_cast<Eigen::Index>(net.parameter_count());
  const auto& lop = problem.interior_op();
  const auto& bop = problem.boundary_op();
  Eigen::VectorXd point_grad(n_params);
  Eigen::VectorXd grad_int = Eigen::VectorXd::Zero(n_params);
  Eigen::VectorXd grad_bd = Eigen::VectorXd::Zero(n_params);
  std::vector<double> ci(lop.alphas().size());
  std::vector<double> cb(bop.alphas().size());

  double sum_int = 0.0;
  for (std::size_t i = 0; i < pts.interior().size(); ++i) {
    const auto x = pts.interior()[i];
    lop.coefficients_at(x, ci);
    const double r = net.combination_gradient(x, lop.alphas(), ci, point_grad) -
                     problem.source()(x);
    sum_int += r * r;
    grad_int.noalias() += r * point_grad;
  }
  double sum_bd = 0.0;
  for (std::size_t i = 0; i < pts.boundary().size(); ++i) {
    const auto x = pts.boundary()[i];
    bop.coefficients_at(x, cb);
    const double r = net.combination_gradient(x, bop.alphas(), cb, point_grad) -
                     problem.boundary_data()(x);
    sum_bd += r * r;
    grad_bd.noalias() += r * point_grad;
  }
  const double w1 = pts.interior_weight();
  const double w2 = pts.boundary_weight();
  grad = (2.0 * w1) * grad_int + (2.0 * w2) * grad_bd;
  return w1 * sum_int + w2 * sum_bd;
}

ParameterVector loss_gradient(const EllipticProblem& problem, const ShallowNetwork& net,
                              const CollocationSet& pts) {
  ParameterVector grad;
  loss_and_gradient(problem, net, pts, grad);
  return grad;
}

double discrete_energy_norm(const EllipticProblem& problem, const DifferentiableField& v,
                            const CollocationSet& pts) {
  const ResidualPair qv{[&](PointView x) { return apply_interior(problem, v, x); },
                        [&](PointView x) { return apply_boundary(problem, v, x); }};
  return std::sqrt(std::max(0.0, discrete_pairing(qv, qv, pts)));
}

Eigen::MatrixXd tangent_matrix(const EllipticProblem& problem, const ShallowNetwork& net,
                               const CollocationSet& pts) {
  const auto n_params = static_cast<Eigen::Index>(net.parameter_count());
  const auto n_int = static_cast<Eigen::Index>(pts.interior().size());
  const auto n_bd = static_cast<Eigen::Index>(pts.boundary().size());
  Eigen::MatrixXd m(n_int + n_bd, n_params);
  Eigen::VectorXd g(n_params);
  const auto& lop = problem.interior_op();
  const auto& bop = problem.boundary_op();
  std::vector<double> ci(lop.alphas().size());
  std::vector<double> cb(bop.alphas().size());
  const double s1 = std::sqrt(pts.interior_weight());
  const double s2 = std::sqrt(pts.boundary_weight());
  for (Eigen::Index i = 0; i < n_int; ++i) {
    const auto x = pts.interior()[static_cast<std::size_t>(i)];
    lop.coefficients_at(x, ci);
    net.combination_gradient(x, lop.alphas(), ci, g);
    m.row(i) = s1 * g.transpose();
  }
  for (Eigen::Index i = 0; i < n_bd; ++i) {
    const auto x = pts.boundary()[static_cast<std::size_t>(i)];
    bop.coefficients_at(x, cb);
    net.combination_gradient(x, bop.alphas(), cb, g);
    m.row(n_int + i) = s2 * g.transpose();
  }
  return m;
}

UnisolvencyReport check_unisolvency(const EllipticProblem& problem,
                                    const ShallowNetwork& net, const CollocationSet& pts) {
  const Eigen::MatrixXd m = tangent_matrix(problem, net, pts);
  UnisolvencyReport report;
  report.dimension = static_cast<std::size_t>(m.cols());
  report.rows = static_cast<std::size_t>(m.rows());
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (sv.size() == 0) return report;
  report.largest_singular_value = sv(0);
  report.smallest_singular_value = sv(sv.size() - 1);
  const double threshold = 1e-10 * sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++report.rank;
  }
  return report;
}

void write_collocation_csv(std::ostream& out, const CollocationSet& pts) {
  const std::size_t d = pts.domain().dimension();
  out << "kind";
  for (std::size_t k = 0; k < d; ++k) out << ",x" << k;
  out << '\n' << std::setprecision(17);
  auto emit = [&](const char* kind, const PointSet& set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
      out << kind;
      for (double c : set[i]) out << ',' << c;
      out << '\n';
    }
  };
  emit("interior", pts.interior());
  emit("boundary", pts.boundary());
}

CollocationSet read_collocation_csv(std::istream& in, const Domain& domain,
                                    std::uint64_t seed, double gamma1, double gamma2) {
  const std::size_t d = domain.dimension();
  std::string line;
  if (!std::getline(in, line) || line.rfind("kind", 0) != 0) {
    throw std::runtime_error("collocation CSV lacks the `kind,...` header");
  }
  PointSet interior(d), boundary(d);
  std::vector<double> x(d);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kind, cell;
    std::getline(ls, kind, ',');
    for (std::size_t k = 0; k < d; ++k) {
      if (!std::getline(ls, cell, ',')) throw std::runtime_error("collocation CSV row too short");
      x[k] = std::stod(cell);
    }
    if (kind == "interior") {
      interior.push_back(x);
    } else if (kind == "boundary") {
      boundary.push_back(x);
    } else {
      throw std::runtime_error("unknown point kind '" + kind + "'");
    }
  }
  return CollocationSet(domain, std::move(interior), std::move(boundary), seed, gamma1, gamma2);
}

}  // namespace pinnls
