#include <doctest.h>

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "cqed/io.hpp"

using namespace cqed;

namespace
{

SystemConfig bare_cavity()
{
	SystemConfig c;
	c.resonator = {5000.0, 17.0, 6.0};
	c.probe = {5000.0, 0.5};
	c.layout = {5, 0};
	return c;
}

SystemConfig table_two(int qubits)
{
	SystemConfig c;
	c.resonator = {5172.0, 17.0, 6.1};
	DqdParams d1;
	d1.t = 0.5 * 5138.0;
	d1.gamma1 = 2 * 6.4;
	DqdParams d2;
	d2.t = 0.5 * 5156.2;
	d2.gamma1 = 2 * 6.0;
	c.dqds = {d1};
	c.couplings = {51.1};
	if (qubits == 2)
	{
		c.dqds.push_back(d2);
		c.couplings.push_back(56.7);
	}
	c.probe = {5172.0, alpha_for_photons(c.resonator, 0.05)};
	c.layout = {3, qubits};
	return c;
}

int count_minima(SpectrumTrace const & t, double below)
{
	int n = 0;
	for (std::size_t i = 1; i + 1 < t.s11.size(); ++i)
	{
		double const a = std::abs(t.s11[i - 1]), b = std::abs(t.s11[i]), c = std::abs(t.s11[i + 1]);
		n += b < a && b <= c && b < below;
	}
	return n;
}

Complex bare_oracle(ResonatorParams const & r, double nu_p)
{
	double const d = nu_p - r.omega_r;
	return Complex(0.5 * (r.kappa_int - r.kappa_ext), d) / Complex(0.5 * r.kappa_total(), d);
}

}  // namespace

TEST_CASE("liouvillian of nothing is zero")
{
	std::vector<OperatorMatrix> const none;
	Liouvillian const l = build_liouvillian(OperatorMatrix::Zero(3, 3), none);
	CHECK(l.matrix.rows() == 9);
	CHECK(max_abs(l.matrix) == 0.0);
}

TEST_CASE("decaying qubit")
{
	double const gamma = 3.0, nu = 40.0;
	OperatorMatrix const H = -0.5 * nu * pauli(PauliAxis::z);
	std::vector<OperatorMatrix> const c = {std::sqrt(gamma) * sigma_minus()};
	Liouvillian const l = build_liouvillian(H, c);
	CHECK(trace_preservation_residual(l) < 1e-14);

	DensityMatrix const rho = steady_state(l);
	OperatorMatrix ground = OperatorMatrix::Zero(2, 2);
	ground(0, 0) = 1.0;
	CHECK(max_abs(rho - ground) < 1e-14);

	// spectrum {0, -gamma, -gamma/2 +- i nu}
	Eigen::ComplexEigenSolver<OperatorMatrix> es(l.matrix);
	std::vector<Complex> ev(es.eigenvalues().begin(), es.eigenvalues().end());
	auto has = [&](Complex z) {
		return std::any_of(ev.begin(), ev.end(), [&](Complex e) { return std::abs(e - z) < 1e-10; });
	};
	CHECK(has(0.0));
	CHECK(has(-gamma));
	CHECK(has(Complex(-0.5 * gamma, nu)));
	CHECK(has(Complex(-0.5 * gamma, -nu)));
}

TEST_CASE("degenerate kernel is reported")
{
	std::vector<OperatorMatrix> const none;
	Liouvillian const l = build_liouvillian(-0.5 * 10.0 * pauli(PauliAxis::z), none);
	try
	{
		steady_state(l);
		FAIL("expected NonUniqueSteadyState");
	}
	catch (NonUniqueSteadyState const & e)
	{
		CHECK(e.kernel_dimension == 2);
	}
}

TEST_CASE("scattering observables")
{
	int const n = 12;
	double const kappa = 4.0;
	Complex const alpha(0.3, -0.1);
	OperatorMatrix const a = fock_destroy(n);
	OperatorMatrix const id = OperatorMatrix::Identity(n, n);

	DensityMatrix vac = OperatorMatrix::Zero(n, n);
	vac(0, 0) = 1.0;
	Scattering const sv = scattering(vac, std::sqrt(kappa) * a + alpha * id);
	CHECK(std::abs(sv.beta - alpha) < 1e-15);
	CHECK(sv.flux == doctest::Approx(std::norm(alpha)).epsilon(1e-14));

	DensityMatrix one = OperatorMatrix::Zero(n, n);
	one(1, 1) = 1.0;
	Scattering const s1 = scattering(one, std::sqrt(kappa) * a);
	CHECK(std::abs(s1.beta) < 1e-15);
	CHECK(s1.flux == doctest::Approx(kappa).epsilon(1e-14));

	Complex const z(0.8, 0.35);
	StateVector psi(n);
	double fact = 1.0;
	for (int k = 0; k < n; ++k)
	{
		if (k > 0)
			fact *= k;
		psi(k) = std::exp(-0.5 * std::norm(z)) * std::pow(z, k) / std::sqrt(fact);
	}
	psi.normalize();
	DensityMatrix const coh = psi * psi.adjoint();
	Scattering const sc = scattering(coh, std::sqrt(kappa) * a + alpha * id);
	CHECK(std::abs(sc.beta - (std::sqrt(kappa) * z + alpha)) < 1e-8);
}

TEST_CASE("bare cavity reflection")
{
	SystemConfig const c = bare_cavity();
	Complex const s = reflection_coefficient(c, 5000.0);
	CHECK(std::abs(s) == doctest::Approx(11.0 / 23.0).epsilon(1e-5));
	CHECK(std::abs(s - bare_oracle(c.resonator, 5000.0)) < 1e-5);
	CHECK(std::abs(reflection_coefficient(c, 5000.0 + 100 * 23.0)) > 0.999);
	for (double nu : {4970.0, 4993.5, 5011.0})
		CHECK(std::abs(reflection_coefficient(c, nu) - bare_oracle(c.resonator, nu)) < 1e-5);

	SystemConfig silent = c;
	silent.probe.alpha = 0.0;
	CHECK_THROWS_AS(reflection_coefficient(silent, 5000.0), ConfigError);
}

TEST_CASE("sparse and dense solvers agree")
{
	SystemConfig c = table_two(2);
	c.probe.omega_p = 5130.0;
	c.dqds[1].delta = 40.0;
	OperatorMatrix const H = build_hamiltonian(c);
	std::vector<OperatorMatrix> const ops = build_collapse_ops(c).all();
	Liouvillian const dense = build_liouvillian(H, ops);
	SparseSuperoperator const sparse = build_sparse_liouvillian(H, ops);
	CHECK(max_abs(OperatorMatrix(sparse) - dense.matrix) == 0.0);

	DensityMatrix const a = steady_state(dense);
	DensityMatrix const b = steady_state(sparse, static_cast<int>(H.rows()));
	CHECK(max_abs(a - b) < 1e-12);
	CHECK(liouvillian_residual(sparse, b) < 1e-10);
}

TEST_CASE("steady states are physical on random configs")
{
	std::mt19937_64 rng(4242);
	auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
	double worst_res = 0, worst_herm = 0, worst_tr = 0, min_eig = 0, max_s = 0;
	for (int n = 0; n < 200; ++n)
	{
		SystemConfig c;
		c.resonator = {u(4500, 5500), u(1, 25), u(1, 15)};
		int const k = static_cast<int>(rng() % 3);
		for (int q = 0; q < k; ++q)
		{
			DqdParams d;
			d.t = 0.5 * (c.resonator.omega_r + u(-200, 200));
			d.delta = u(-300, 300);
			d.gamma1 = u(0, 15);
			d.gamma_phi = u(0, 5);
			c.dqds.push_back(d);
			c.couplings.push_back(u(0, 70));
		}
		c.probe = {c.resonator.omega_r + u(-150, 150), alpha_for_photons(c.resonator, u(0.01, 0.3))};
		c.layout = {k == 2 ? 3 : 4, k};
		SteadyPoint const p = solve_point(c);
		DensityDiagnostics const d = diagnose(p.rho);
		worst_res = std::max(worst_res, p.residual);
		worst_herm = std::max(worst_herm, d.hermiticity);
		worst_tr = std::max(worst_tr, d.trace_error);
		min_eig = std::min(min_eig, d.min_eigenvalue);
		max_s = std::max(max_s, std::abs(p.s11));
	}
	CHECK(worst_res < 1e-8);
	CHECK(worst_herm < 1e-9);
	CHECK(worst_tr < 1e-9);
	CHECK(min_eig > -1e-7);
	CHECK(max_s <= 1 + 1e-6);
}

TEST_CASE("fock convergence at about 0.3 photons")
{
	SystemConfig c = table_two(1);
	c.probe.alpha = alpha_for_photons(c.resonator, 0.3);
	c.layout.fock_cutoff = 5;
	for (double nu : {5100.0, 5125.0, 5172.0, 5220.0})
	{
		c.probe.omega_p = nu;
		SystemConfig c6 = c;
		c6.layout.fock_cutoff = 6;
		CHECK(std::abs(std::abs(solve_point(c).s11) - std::abs(solve_point(c6).s11)) < 1e-3);
	}
}

TEST_CASE("weak drive is linear")
{
	for (char const * recipe : {"fig2b", "fig2d"})
	{
		SystemConfig const c = load_config(std::string(CQED_RECIPE_DIR) + "/" + recipe + ".json");
		std::vector<double> const grid = linspace(5000.0, 5350.0, 71);
		SystemConfig half = c;
		half.probe.alpha *= 0.5;
		SpectrumTrace const a = spectrum_trace(c, grid, 4);
		SpectrumTrace const b = spectrum_trace(half, grid, 4);
		double worst = 0;
		for (std::size_t i = 0; i < grid.size(); ++i)
			worst = std::max(worst, std::abs(a.s11[i] - b.s11[i]));
		CHECK_MESSAGE(worst < 1e-3, recipe);
	}
}

TEST_CASE("spectrum_trace")
{
	SystemConfig const c = table_two(1);
	std::vector<double> const one = {5150.0};
	SpectrumTrace const t = spectrum_trace(c, one);
	CHECK(t.s11[0] == reflection_coefficient(c, 5150.0));

	SUBCASE("resonant Jaynes-Cummings response is symmetric")
	{
		SystemConfig r = c;
		r.dqds[0].t = 0.5 * r.resonator.omega_r;
		std::vector<double> const grid = linspace(r.resonator.omega_r - 120, r.resonator.omega_r + 120, 97);
		SpectrumTrace const s = spectrum_trace(r, grid, 4);
		for (std::size_t i = 0; i < grid.size(); ++i)
			CHECK(std::abs(std::abs(s.s11[i]) - std::abs(s.s11[grid.size() - 1 - i])) < 1e-3);
	}

	SUBCASE("worker count does not change the result")
	{
		std::vector<double> const grid = linspace(5100.0, 5250.0, 31);
		SpectrumTrace const a = spectrum_trace(c, grid, 1);
		SpectrumTrace const b = spectrum_trace(c, grid, 7);
		CHECK(a.s11 == b.s11);
		CHECK(a.n_flux == b.n_flux);
	}

	std::vector<double> const empty;
	CHECK_THROWS(spectrum_trace(c, empty));
}

TEST_CASE("sweep_2d")
{
	SystemConfig const c = table_two(2);
	std::vector<double> const grid = linspace(5000.0, 5350.0, 351);

	SweepSpec const single{"dqds[1].delta", {-700.0}};
	std::vector<SpectrumTrace> const one = sweep_2d(c, single, grid, 4);
	REQUIRE(one.size() == 1);
	SystemConfig moved = c;
	moved.dqds[1].delta = -700.0;
	CHECK(one[0].s11 == spectrum_trace(moved, grid, 4).s11);
	CHECK(one[0].swept_path == "dqds[1].delta");
	CHECK(one[0].swept_value == -700.0);

	SUBCASE("minima 2 -> 3 -> 2 as the second qubit is tuned in")
	{
		SweepSpec const s{"dqds[1].delta", {-2900.0, -500.0, 0.0}};
		std::vector<SpectrumTrace> const t = sweep_2d(c, s, grid, 4);
		CHECK(count_minima(t[0], 0.97) == 2);
		CHECK(count_minima(t[1], 0.97) == 3);
		CHECK(count_minima(t[2], 0.97) == 2);
	}

	SUBCASE("a far-detuned qubit decouples")
	{
		SweepSpec const far{"dqds[1].delta", {20000.0}};
		SpectrumTrace const t = sweep_2d(c, far, grid, 4).front();
		SpectrumTrace const single_qubit = spectrum_trace(without_qubit(c, 1), grid, 4);
		double worst = 0;
		for (std::size_t i = 0; i < grid.size(); ++i)
			worst = std::max(worst, std::abs(std::abs(t.s11[i]) - std::abs(single_qubit.s11[i])));
		CHECK(worst < 1e-3);
	}

	CHECK_THROWS_AS(sweep_2d(c, {"dqds[2].delta", {0.0}}, grid), ConfigError);
}

TEST_CASE("qubit_spectroscopy_trace")
{
	SystemConfig c = bare_cavity();
	std::vector<double> const grid = linspace(4500.0, 4600.0, 21);
	PhaseTrace const flat = qubit_spectroscopy_trace(c, grid, 1.0, 0.0);
	for (double v : flat.values)
		CHECK(v == 0.0);

	SystemConfig q = table_two(1);
	q.dqds[0].t = 0.5 * 4700.0;
	std::vector<double> const spec = linspace(4600.0, 4750.0, 61);
	PhaseTrace const one = qubit_spectroscopy_trace(q, spec, 1.0, 0.25);
	PhaseTrace const two = qubit_spectroscopy_trace(q, spec, 2.0, 0.25);
	CHECK(one.dispersive_ok);
	for (std::size_t i = 0; i < spec.size(); ++i)
		CHECK(two.values[i] - 0.25 == doctest::Approx(2 * (one.values[i] - 0.25)).epsilon(1e-12));

	q.dqds[0].t = 0.5 * q.resonator.omega_r;
	CHECK_FALSE(qubit_spectroscopy_trace(q, spec, 1.0, 0.0).dispersive_ok);
}

TEST_CASE("linspace")
{
	CHECK(linspace(1.0, 2.0, 1) == std::vector<double>{1.0});
	std::vector<double> const g = linspace(0.0, 1.0, 5);
	CHECK(g.size() == 5);
	CHECK(g.front() == 0.0);
	CHECK(g.back() == 1.0);
	CHECK(g[2] == 0.5);
}
