#include "einsel/centralspin.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace einsel {

namespace {

constexpr double kPi = std::numbers::pi;

std::pair<Complex, Complex> normalized_pair(Complex a, Complex b) {
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (!std::isfinite(norm) || std::abs(norm - 1.0) > kNormRejectThreshold) {
        throw NumericalError("ProductEnvironment: spin norm " + std::to_string(norm) +
                             " deviates from 1 by more than " +
                             std::to_string(kNormRejectThreshold));
    }
    return {a / norm, b / norm};
}

}  // namespace

CentralSpinModel::CentralSpinModel(Eigen::VectorXd couplings)
    : couplings_(std::move(couplings)) {
    if (couplings_.size() < 1) {
        throw std::invalid_argument("CentralSpinModel: need at least one environment spin");
    }
    if (!couplings_.allFinite()) {
        throw std::invalid_argument("CentralSpinModel: couplings must be finite");
    }
}

CentralSpinModel CentralSpinModel::random_uniform(int num_env, std::uint64_t seed) {
    if (num_env < 1) {
        throw std::invalid_argument("CentralSpinModel: need at least one environment spin");
    }
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::VectorXd g(num_env);
    for (int i = 0; i < num_env; ++i) {
        g(i) = 1.0 - unit(engine);  // uniform on (0, 1]
    }
    return CentralSpinModel(std::move(g));
}

ProductEnvironment::ProductEnvironment(std::vector<std::pair<Complex, Complex>> spins)
    : spins_(std::move(spins)) {
    if (spins_.empty()) {
        throw std::invalid_argument("ProductEnvironment: need at least one spin");
    }
    for (auto& spin : spins_) {
        spin = normalized_pair(spin.first, spin.second);
    }
}

ProductEnvironment ProductEnvironment::plus_x(int num_spins) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    return ProductEnvironment(std::vector<std::pair<Complex, Complex>>(
        num_spins, {Complex{inv_sqrt2, 0.0}, Complex{inv_sqrt2, 0.0}}));
}

ProductEnvironment ProductEnvironment::z_basis(int num_spins) {
    return ProductEnvironment(std::vector<std::pair<Complex, Complex>>(
        num_spins, {Complex{1.0, 0.0}, Complex{0.0, 0.0}}));
}

PureState ProductEnvironment::to_state() const {
    // Each new spin enters as the least significant bit, keeping spin 0 the
    // most significant qubit of the environment register.
    Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
    for (const auto& [a, b] : spins_) {
        Eigen::VectorXcd next(2 * amps.size());
        for (Eigen::Index j = 0; j < amps.size(); ++j) {
            next(2 * j) = amps(j) * a;
            next(2 * j + 1) = amps(j) * b;
        }
        amps = std::move(next);
    }
    return PureState(std::move(amps));
}

double hamiltonian_phase(const CentralSpinModel& model, Eigen::Index basis_index) {
    const int n = model.num_qubits();
    if (basis_index < 0 || basis_index >= (Eigen::Index{1} << n)) {
        throw std::invalid_argument("hamiltonian_phase: basis index out of range");
    }
    const int central_bit = static_cast<int>((basis_index >> (n - 1)) & 1);
    const double s0 = central_bit ? -1.0 : 1.0;
    double env_sum = 0.0;
    for (int i = 0; i < model.num_env(); ++i) {
        const int bit = static_cast<int>((basis_index >> (n - 2 - i)) & 1);
        env_sum += model.couplings()(i) * (bit ? -1.0 : 1.0);
    }
    return 0.5 * s0 * env_sum;
}

Eigen::VectorXd diagonal_energies(const CentralSpinModel& model) {
    const int num_env = model.num_env();
    const Eigen::Index env_dim = Eigen::Index{1} << num_env;

    // Environment sums sum_i g_i s_i for every env bit pattern, built one
    // spin at a time (each new spin is the least significant bit).
    Eigen::VectorXd env_sum = Eigen::VectorXd::Zero(1);
    for (int i = 0; i < num_env; ++i) {
        const double g = model.couplings()(i);
        Eigen::VectorXd next(2 * env_sum.size());
        for (Eigen::Index j = 0; j < env_sum.size(); ++j) {
            next(2 * j) = env_sum(j) + g;
            next(2 * j + 1) = env_sum(j) - g;
        }
        env_sum = std::move(next);
    }

    Eigen::VectorXd energies(2 * env_dim);
    energies.head(env_dim) = 0.5 * env_sum;   // central bit 0, s0 = +1
    energies.tail(env_dim) = -0.5 * env_sum;  // central bit 1, s0 = -1
    return energies;
}

PureState evolve(const Eigen::VectorXd& energies, const PureState& psi0, double t) {
    if (energies.size() != psi0.dim()) {
        throw std::invalid_argument("evolve: energy table does not match register size");
    }
    Eigen::VectorXcd amps(psi0.dim());
    for (Eigen::Index k = 0; k < psi0.dim(); ++k) {
        amps(k) = psi0.coeff(k) * std::polar(1.0, -energies(k) * t);
    }
    return PureState(std::move(amps));
}

PureState evolve(const CentralSpinModel& model, const PureState& psi0, double t) {
    if (psi0.num_qubits() != model.num_qubits()) {
        throw std::invalid_argument("evolve: state register does not match model (" +
                                    std::to_string(psi0.num_qubits()) + " vs " +
                                    std::to_string(model.num_qubits()) + " qubits)");
    }
    return evolve(diagonal_energies(model), psi0, t);
}

Complex decoherence_factor(const CentralSpinModel& model, const ProductEnvironment& env,
                           double t) {
    if (env.size() != model.num_env()) {
        throw std::invalid_argument("decoherence_factor: environment size mismatch");
    }
    Complex r{1.0, 0.0};
    for (int i = 0; i < env.size(); ++i) {
        const double g = model.couplings()(i);
        r *= std::norm(env.a(i)) * std::polar(1.0, -g * t) +
             std::norm(env.b(i)) * std::polar(1.0, g * t);
    }
    return r;
}

DensityMatrix central_state(const CentralSpinModel& model, const PureState& psi_t) {
    if (psi_t.num_qubits() != model.num_qubits()) {
        throw std::invalid_argument("central_state: state register does not match model");
    }
    return partial_trace(psi_t, QubitSubset({0}));
}

TimeGrid::TimeGrid(Eigen::VectorXd times) : times_(std::move(times)) {
    if (times_.size() < 1) {
        throw std::invalid_argument("TimeGrid: empty grid");
    }
    if (!times_.allFinite() || times_(0) < 0.0) {
        throw std::invalid_argument("TimeGrid: times must be finite and >= 0");
    }
    for (Eigen::Index i = 1; i < times_.size(); ++i) {
        if (times_(i) <= times_(i - 1)) {
            throw std::invalid_argument("TimeGrid: times must be strictly ascending");
        }
    }
}

TimeGrid TimeGrid::uniform(double t_max, int steps) {
    if (steps < 1) {
        throw std::invalid_argument("TimeGrid: steps must be >= 1");
    }
    if (t_max < 0.0 || (steps > 1 && t_max <= 0.0)) {
        throw std::invalid_argument("TimeGrid: t_max must be positive for steps > 1");
    }
    if (steps == 1) {
        return TimeGrid(Eigen::VectorXd::Constant(1, t_max));
    }
    return TimeGrid(Eigen::VectorXd::LinSpaced(steps, 0.0, t_max));
}

std::vector<TrajectoryPoint> bloch_trajectory(const CentralSpinModel& model,
                                              const PureState& central,
                                              const ProductEnvironment& env,
                                              const TimeGrid& grid) {
    if (central.num_qubits() != 1) {
        throw std::invalid_argument("bloch_trajectory: central state must be one qubit");
    }
    if (env.size() != model.num_env()) {
        throw std::invalid_argument("bloch_trajectory: environment size mismatch");
    }
    const PureState psi0 = tensor(central, env.to_state());
    const Eigen::VectorXd energies = diagonal_energies(model);

    std::vector<TrajectoryPoint> points;
    points.reserve(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const DensityMatrix rho = central_state(model, evolve(energies, psi0, t));
        points.push_back({t, bloch_vector(rho), purity(rho)});
    }
    return points;
}

DecoherenceTime decoherence_time(const CentralSpinModel& model, const ProductEnvironment& env,
                                 double epsilon, int grid_points, double t_max) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("decoherence_time: epsilon must lie in (0, 1)");
    }
    if (grid_points < 2) {
        throw std::invalid_argument("decoherence_time: need at least two grid points");
    }
    const double g_mean = model.couplings().cwiseAbs().mean();
    if (g_mean == 0.0) {
        return {std::numeric_limits<double>::infinity(), false};
    }
    if (t_max <= 0.0) {
        t_max = 4.0 * kPi / g_mean;
    }
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(grid_points, 0.0, t_max);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        if (std::abs(decoherence_factor(model, env, grid(i))) <= epsilon) {
            return {grid(i), true};
        }
    }
    return {std::numeric_limits<double>::infinity(), false};
}

}  // namespace einsel
