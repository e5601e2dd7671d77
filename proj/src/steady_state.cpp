#include "cqed/steady_state.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/parallel.hpp"

namespace cqed
{

Liouvillian build_liouvillian(OperatorMatrix const & H, std::span<OperatorMatrix const> collapse)
{
	Eigen::Index const d = H.rows();
	if (H.cols() != d)
		throw DimensionMismatch("Hamiltonian is not square");

	// L = I (x) K + conj(K) (x) I + sum_c conj(c) (x) c, with K = -iH - sum_c c^dag c / 2
	OperatorMatrix K = Complex(0.0, -1.0) * H;
	for (auto const & c : collapse)
	{
		if (c.rows() != d || c.cols() != d)
			throw DimensionMismatch(
				"collapse operator of size " + std::to_string(c.rows()) + " does not match Hamiltonian size " +
				std::to_string(d));
		K.noalias() -= 0.5 * c.adjoint() * c;
	}

	OperatorMatrix const I = OperatorMatrix::Identity(d, d);
	Liouvillian liou;
	liou.hilbert_dim = static_cast<int>(d);
	liou.matrix = Eigen::kroneckerProduct(I, K);
	liou.matrix += Eigen::kroneckerProduct(K.conjugate(), I);
	for (auto const & c : collapse)
		liou.matrix += Eigen::kroneckerProduct(c.conjugate(), c);
	return liou;
}

namespace
{

Eigen::RowVectorXcd trace_row(int d)
{
	Eigen::RowVectorXcd row = Eigen::RowVectorXcd::Zero(d * d);
	for (int i = 0; i < d; ++i)
		row(i + i * d) = 1.0;
	return row;
}

StateVector vec(DensityMatrix const & rho)
{
	return Eigen::Map<StateVector const>(rho.data(), rho.size());
}

}  // namespace

double trace_preservation_residual(Liouvillian const & liou)
{
	return max_abs(trace_row(liou.hilbert_dim) * liou.matrix);
}

DensityMatrix steady_state(Liouvillian const & liou)
{
	int const d = liou.hilbert_dim;
	Eigen::Index const n = static_cast<Eigen::Index>(d) * d;

	OperatorMatrix system = liou.matrix;
	system.row(0) = trace_row(d);
	StateVector rhs = StateVector::Zero(n);
	rhs(0) = 1.0;

	Eigen::PartialPivLU<OperatorMatrix> lu(system);
	StateVector x = lu.solve(rhs);

	// PartialPivLU skips exact zero pivots, so rcond alone misses an exactly singular system.
	Eigen::VectorXd const pivots = lu.matrixLU().diagonal().cwiseAbs();
	bool const suspicious =
		!x.allFinite() || lu.rcond() < 1e-13 || pivots.minCoeff() < 1e-13 * pivots.maxCoeff();
	if (suspicious)
	{
		Eigen::FullPivLU<OperatorMatrix> full(liou.matrix);
		full.setThreshold(1e-10);
		int const kernel = static_cast<int>(n - full.rank());
		if (kernel != 1)
			throw NonUniqueSteadyState(
				kernel, "Liouvillian kernel has dimension " + std::to_string(kernel) + "; steady state is not unique");
	}

	DensityMatrix rho = Eigen::Map<DensityMatrix>(x.data(), d, d);
	rho = 0.5 * (rho + rho.adjoint()).eval();
	rho /= rho.trace();
	return rho;
}

double liouvillian_residual(Liouvillian const & liou, DensityMatrix const & rho)
{
	return (liou.matrix * vec(rho)).norm();
}

DensityDiagnostics diagnose(DensityMatrix const & rho)
{
	Eigen::SelfAdjointEigenSolver<OperatorMatrix> eig(rho, Eigen::EigenvaluesOnly);
	return {hermiticity_error(rho), std::abs(rho.trace() - 1.0), eig.eigenvalues().minCoeff()};
}

SparseSuperoperator build_sparse_liouvillian(OperatorMatrix const & H, std::span<OperatorMatrix const> collapse)
{
	Eigen::Index const d = H.rows();
	if (H.cols() != d)
		throw DimensionMismatch("Hamiltonian is not square");
	OperatorMatrix K = Complex(0.0, -1.0) * H;
	for (auto const & c : collapse)
	{
		if (c.rows() != d || c.cols() != d)
			throw DimensionMismatch(
				"collapse operator of size " + std::to_string(c.rows()) + " does not match Hamiltonian size " +
				std::to_string(d));
		K.noalias() -= 0.5 * c.adjoint() * c;
	}
	auto sparse = [](OperatorMatrix const & m) -> SparseSuperoperator { return m.sparseView(0.0, 0.0); };
	SparseSuperoperator I(d, d);
	I.setIdentity();
	SparseSuperoperator const Ks = sparse(K);
	SparseSuperoperator L = Eigen::kroneckerProduct(I, Ks);
	L += SparseSuperoperator(Eigen::kroneckerProduct(SparseSuperoperator(Ks.conjugate()), I));
	for (auto const & c : collapse)
	{
		SparseSuperoperator const cs = sparse(c);
		L += SparseSuperoperator(Eigen::kroneckerProduct(SparseSuperoperator(cs.conjugate()), cs));
	}
	L.makeCompressed();
	return L;
}

DensityMatrix steady_state(SparseSuperoperator const & liou, int hilbert_dim)
{
	int const d = hilbert_dim;
	Eigen::Index const n = static_cast<Eigen::Index>(d) * d;
	if (liou.rows() != n || liou.cols() != n)
		throw DimensionMismatch("superoperator does not match the Hilbert dimension");

	// Swap row 0 for the trace row. Row-wise edits are awkward in column-major storage, so
	// rebuild from triplets.
	std::vector<Eigen::Triplet<Complex>> entries;
	entries.reserve(static_cast<std::size_t>(liou.nonZeros()) + d);
	for (Eigen::Index k = 0; k < liou.outerSize(); ++k)
		for (SparseSuperoperator::InnerIterator it(liou, k); it; ++it)
			if (it.row() != 0)
				entries.emplace_back(it.row(), it.col(), it.value());
	for (int i = 0; i < d; ++i)
		entries.emplace_back(0, i + i * d, 1.0);
	SparseSuperoperator system(n, n);
	system.setFromTriplets(entries.begin(), entries.end());

	StateVector rhs = StateVector::Zero(n);
	rhs(0) = 1.0;
	Eigen::SparseLU<SparseSuperoperator> lu;
	lu.compute(system);
	StateVector x;
	bool ok = lu.info() == Eigen::Success;
	if (ok)
	{
		x = lu.solve(rhs);
		// With unit trace every entry of a valid density matrix is bounded by 1.
		ok = lu.info() == Eigen::Success && x.allFinite() && x.cwiseAbs().maxCoeff() <= 1.0 + 1e-6 &&
			(system * x - rhs).norm() <= 1e-9;
	}
	if (!ok)
		return steady_state(Liouvillian{d, OperatorMatrix(liou)});

	DensityMatrix rho = Eigen::Map<DensityMatrix>(x.data(), d, d);
	rho = 0.5 * (rho + rho.adjoint()).eval();
	rho /= rho.trace();
	return rho;
}

double liouvillian_residual(SparseSuperoperator const & liou, DensityMatrix const & rho)
{
	return (liou * vec(rho)).norm();
}

Scattering scattering(DensityMatrix const & rho, OperatorMatrix const & L)
{
	if (rho.rows() != L.rows() || rho.cols() != L.cols())
		throw DimensionMismatch("scattering operator does not match density matrix");
	Complex const beta = (L * rho).trace();
	double const flux = (L.adjoint() * L * rho).trace().real();
	return {beta, flux};
}

SteadyPoint solve_point(SystemConfig const & config)
{
	constexpr Eigen::Index dense_limit = 8;
	OperatorMatrix const H = build_hamiltonian(config);
	CollapseSet const ops = build_collapse_ops(config);
	std::vector<OperatorMatrix> const all = ops.all();
	SteadyPoint point;
	// Sparse LU only pays off once the superoperator is a few hundred wide.
	if (H.rows() <= dense_limit)
	{
		Liouvillian const liou = build_liouvillian(H, all);
		point.rho = steady_state(liou);
		point.residual = liouvillian_residual(liou, point.rho);
	}
	else
	{
		SparseSuperoperator const liou = build_sparse_liouvillian(H, all);
		point.rho = steady_state(liou, static_cast<int>(H.rows()));
		point.residual = liouvillian_residual(liou, point.rho);
	}
	Scattering const out = scattering(point.rho, ops.scattering);
	// beta / alpha evolves as exp(-i w t); reported S11 uses the analyser phasor exp(+i w t),
	// so the bare cavity reads ((k_int - k_ext)/2 + i(nu_p - nu_r)) / (k/2 + i(nu_p - nu_r)).
	point.s11 = std::conj(out.beta / config.probe.alpha);
	point.flux = out.flux;

	OperatorMatrix const a = embed(fock_destroy(config.layout.fock_cutoff), 0, config.layout);
	point.photons = (a.adjoint() * a * point.rho).trace().real();
	return point;
}

Complex reflection_coefficient(SystemConfig const & config, double nu_p)
{
	if (std::abs(config.probe.alpha) == 0.0)
		throw ConfigError("probe.alpha", "S11 = beta / alpha requires a nonzero probe amplitude");
	SystemConfig probe = config;
	probe.probe.omega_p = nu_p;
	return solve_point(probe).s11;
}

std::vector<double> linspace(double start, double stop, int count)
{
	std::vector<double> grid;
	if (count <= 0)
		return grid;
	grid.reserve(count);
	if (count == 1)
	{
		grid.push_back(start);
		return grid;
	}
	double const step = (stop - start) / (count - 1);
	for (int i = 0; i < count; ++i)
		grid.push_back(i == count - 1 ? stop : start + i * step);
	return grid;
}

namespace
{

// solve_point, with the probe frequency attached to any solver failure
SteadyPoint solve_at_probe(SystemConfig const & point)
{
	try
	{
		return solve_point(point);
	}
	catch (NonUniqueSteadyState const & e)
	{
		throw NonUniqueSteadyState(
			e.kernel_dimension, "at probe " + std::to_string(point.probe.omega_p) + " MHz: " + e.what());
	}
}

}  // namespace

SpectrumTrace spectrum_trace(SystemConfig const & config, std::span<double const> grid, int workers)
{
	if (grid.empty())
		throw ConfigError("grid", "probe grid is empty");
	for (std::size_t i = 1; i < grid.size(); ++i)
		if (!(grid[i] > grid[i - 1]))
			throw ConfigError("grid", "probe grid must be strictly increasing");
	if (std::abs(config.probe.alpha) == 0.0)
		throw ConfigError("probe.alpha", "S11 = beta / alpha requires a nonzero probe amplitude");
	config.validate();

	SpectrumTrace trace;
	trace.config = config;
	trace.probe_freqs.assign(grid.begin(), grid.end());
	trace.s11.resize(grid.size());
	trace.n_flux.resize(grid.size());

	parallel_for(grid.size(), workers, [&](std::size_t i) {
		SystemConfig point = config;
		point.probe.omega_p = grid[i];
		SteadyPoint const p = solve_at_probe(point);
		trace.s11[i] = p.s11;
		trace.n_flux[i] = p.flux;
	});
	return trace;
}

std::vector<SpectrumTrace> sweep_2d(
	SystemConfig const & config, SweepSpec const & sweep, std::span<double const> grid, int workers)
{
	get_parameter(config, sweep.path);  // validates the path
	if (sweep.values.empty())
		throw ConfigError("sweep", "no sweep values");

	std::vector<SystemConfig> configs;
	configs.reserve(sweep.values.size());
	for (double v : sweep.values)
	{
		SystemConfig c = config;
		set_parameter(c, sweep.path, v);
		c.validate();
		configs.push_back(std::move(c));
	}

	// Flatten (value, point) pairs so parallelism is over all solves.
	std::size_t const per = grid.size();
	std::vector<SpectrumTrace> traces(configs.size());
	for (std::size_t s = 0; s < configs.size(); ++s)
	{
		traces[s].config = configs[s];
		traces[s].probe_freqs.assign(grid.begin(), grid.end());
		traces[s].s11.resize(per);
		traces[s].n_flux.resize(per);
		traces[s].swept_path = sweep.path;
		traces[s].swept_value = sweep.values[s];
	}
	if (per == 0)
		throw ConfigError("grid", "probe grid is empty");

	parallel_for(configs.size() * per, workers, [&](std::size_t flat) {
		std::size_t const s = flat / per;
		std::size_t const i = flat % per;
		SystemConfig point = configs[s];
		point.probe.omega_p = grid[i];
		SteadyPoint const p = solve_at_probe(point);
		traces[s].s11[i] = p.s11;
		traces[s].n_flux[i] = p.flux;
	});
	return traces;
}

PhaseTrace qubit_spectroscopy_trace(
	SystemConfig const & config, std::span<double const> grid, double scale, double offset, int workers)
{
	PhaseTrace out;
	out.probe_freqs.assign(grid.begin(), grid.end());

	double max_g = 0.0;
	for (double g : config.couplings)
		max_g = std::max(max_g, g);
	for (auto const & dqd : config.dqds)
		if (std::abs(config.resonator.omega_r - qubit_frequency(dqd)) <= 3.0 * max_g)
			out.dispersive_ok = false;

	SystemConfig reference = config;
	while (reference.num_qubits() > 0)
		reference = without_qubit(reference, reference.num_qubits() - 1);

	SpectrumTrace const with_qubits = spectrum_trace(config, grid, workers);
	SpectrumTrace const bare = spectrum_trace(reference, grid, workers);

	out.values.resize(grid.size());
	for (std::size_t i = 0; i < grid.size(); ++i)
	{
		double const dphi = std::arg(with_qubits.s11[i] / bare.s11[i]);
		out.values[i] = scale * dphi + offset;
	}
	return out;
}

}  // namespace cqed
