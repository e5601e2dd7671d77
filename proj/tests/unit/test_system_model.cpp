#include <doctest.h>

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "cqed/steady_state.hpp"

using namespace cqed;

namespace
{

DqdParams dqd(double delta, double two_t)
{
	DqdParams d;
	d.delta = delta;
	d.t = 0.5 * two_t;
	return d;
}

SystemConfig one_qubit()
{
	SystemConfig c;
	c.resonator = {5170.0, 18.0, 6.5};
	c.dqds = {dqd(0.0, 5166.0)};
	c.dqds[0].gamma1 = 10.6;
	c.couplings = {53.4};
	c.probe = {5150.0, 0.3};
	c.layout = {4, 1};
	return c;
}

}  // namespace

TEST_CASE("qubit_frequency")
{
	CHECK(qubit_frequency(dqd(0.0, 5166.0)) == doctest::Approx(5166.0).epsilon(1e-15));
	CHECK(qubit_frequency(dqd(100.0, 1e-9)) == doctest::Approx(100.0).epsilon(1e-12));
	CHECK(qubit_frequency(dqd(300.0, 400.0)) == doctest::Approx(500.0).epsilon(1e-15));
	for (double delta : {-700.0, -20.0, 13.0, 450.0})
		CHECK(qubit_frequency(dqd(delta, 1000.0)) == qubit_frequency(dqd(-delta, 1000.0)));
}

TEST_CASE("mixing_angle")
{
	auto m0 = mixing_angle(dqd(0.0, 4000.0));
	CHECK(m0.sin_theta == 1.0);
	CHECK(m0.cos_theta == 0.0);

	double const r = 1.0 / std::sqrt(2.0);
	auto mp = mixing_angle(dqd(4000.0, 4000.0));
	CHECK(mp.sin_theta == doctest::Approx(r).epsilon(1e-14));
	CHECK(mp.cos_theta == doctest::Approx(r).epsilon(1e-14));
	auto mm = mixing_angle(dqd(-4000.0, 4000.0));
	CHECK(mm.sin_theta == doctest::Approx(r).epsilon(1e-14));
	CHECK(mm.cos_theta == doctest::Approx(-r).epsilon(1e-14));

	for (double delta : {37.0, 900.0, 5000.0})
	{
		auto a = mixing_angle(dqd(delta, 2000.0));
		auto b = mixing_angle(dqd(-delta, 2000.0));
		CHECK(a.sin_theta == b.sin_theta);
		CHECK(a.cos_theta == -b.cos_theta);
	}
	CHECK_THROWS_AS(mixing_angle(dqd(0.0, 0.0)), DegenerateInput);
}

TEST_CASE("decay_rates")
{
	NoiseSpectrum noise{10.0, 10.0, NoiseMode::derived_from_spectrum};
	auto sweet = decay_rates(dqd(0.0, 3000.0), {123.0, 4.0, NoiseMode::derived_from_spectrum});
	CHECK(sweet.gamma_phi == 0.0);
	CHECK(sweet.gamma1 == doctest::Approx(4.0));

	auto far = decay_rates(dqd(500.0, 1e-9), noise);
	CHECK(far.gamma1 < 1e-20);

	auto diag = decay_rates(dqd(3000.0, 3000.0), noise);
	CHECK(diag.gamma1 == doctest::Approx(5.0).epsilon(1e-14));
	CHECK(diag.gamma_phi == doctest::Approx(5.0).epsilon(1e-14));

	// equal spectra: gamma1 + gamma_phi is the same at every detuning
	for (double delta : {-2000.0, -10.0, 0.0, 800.0, 9000.0})
	{
		auto r = decay_rates(dqd(delta, 3000.0), noise);
		CHECK(r.gamma1 + r.gamma_phi == doctest::Approx(10.0).epsilon(1e-13));
	}

	DqdParams stored = dqd(200.0, 3000.0);
	stored.gamma1 = 7.0;
	stored.gamma_phi = 1.5;
	auto explicit_rates = decay_rates(stored, {99.0, 99.0, NoiseMode::explicit_rates});
	CHECK(explicit_rates.gamma1 == 7.0);
	CHECK(explicit_rates.gamma_phi == 1.5);
}

TEST_CASE("hamiltonian without coupling or drive is diagonal")
{
	SystemConfig c = one_qubit();
	c.dqds.push_back(dqd(300.0, 4800.0));
	c.couplings = {0.0, 0.0};
	c.probe.alpha = 0.0;
	c.layout = {3, 2};
	OperatorMatrix const H = build_hamiltonian(c);
	OperatorMatrix const off = H - OperatorMatrix(H.diagonal().asDiagonal());
	CHECK(max_abs(off) == 0.0);

	double const dr = c.resonator.omega_r - c.probe.omega_p;
	double const d1 = qubit_frequency(c.dqds[0]) - c.probe.omega_p;
	double const d2 = qubit_frequency(c.dqds[1]) - c.probe.omega_p;
	std::vector<double> expected, got;
	for (int n = 0; n < 3; ++n)
		for (int s1 : {1, -1})       // sigma_z eigenvalue, index 0 = |g> = +1
			for (int s2 : {1, -1})
				expected.push_back(n * dr - 0.5 * (s1 * d1 + s2 * d2));
	for (Eigen::Index i = 0; i < H.rows(); ++i)
		got.push_back(H(i, i).real());
	CHECK(got.size() == expected.size());
	for (std::size_t i = 0; i < got.size(); ++i)
		CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-13));
}

TEST_CASE("hamiltonian is hermitian")
{
	SystemConfig c = one_qubit();
	c.dqds[0].delta = 321.0;
	c.probe.alpha = Complex(0.4, -0.2);
	CHECK(hermiticity_error(build_hamiltonian(c)) < 1e-12);
	c.dqds.push_back(dqd(-150.0, 5000.0));
	c.couplings.push_back(60.0);
	c.layout = {3, 2};
	CHECK(hermiticity_error(build_hamiltonian(c)) < 1e-12);
	c.rwa = false;
	c.probe.alpha = 0.0;
	CHECK(hermiticity_error(build_hamiltonian(c)) < 1e-12);
}

TEST_CASE("full hamiltonian rejects a probe")
{
	SystemConfig c = one_qubit();
	c.rwa = false;
	CHECK_THROWS_AS(build_hamiltonian(c), UnsupportedCombination);
	c.probe.alpha = 0.0;
	CHECK_NOTHROW(build_hamiltonian(c));
}

TEST_CASE("rwa and full one-excitation levels agree for weak coupling")
{
	SystemConfig c = one_qubit();
	c.couplings = {0.01 * c.resonator.omega_r};
	c.probe = {0.0, 0.0};
	c.layout.fock_cutoff = 5;
	auto levels = [](SystemConfig const & cfg) {
		Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(build_hamiltonian(cfg));
		return Eigen::VectorXd(es.eigenvalues());
	};
	Eigen::VectorXd const rwa = levels(c);
	c.rwa = false;
	Eigen::VectorXd const full = levels(c);
	double const bound = 5 * c.couplings[0] * c.couplings[0] / c.resonator.omega_r;
	for (int i = 0; i < 3; ++i)
		CHECK(std::abs(rwa(i) - full(i)) < bound);
}

TEST_CASE("collapse operators")
{
	SystemConfig c = one_qubit();
	c.dqds[0].gamma1 = 0.0;
	c.dqds[0].gamma_phi = 8.0;
	CollapseSet const ops = build_collapse_ops(c);
	REQUIRE(ops.channels.size() == 2);
	OperatorMatrix const sz = embed(pauli(PauliAxis::z), 1, c.layout);
	CHECK(max_abs(ops.channels[0] - 2.0 * sz) < 1e-15);
	CHECK(ops.all().size() == 3);

	OperatorMatrix const a = embed(fock_destroy(4), 0, c.layout);
	CHECK(max_abs(ops.scattering - (std::sqrt(6.5) * a + 0.3 * OperatorMatrix::Identity(8, 8))) < 1e-15);
}

TEST_CASE("undriven lossless resonator reduces to the commutator")
{
	SystemConfig c;
	c.resonator = {5000.0, 0.0, 2.0};
	c.probe = {4990.0, 0.0};
	c.layout = {3, 0};
	CollapseSet const ops = build_collapse_ops(c);
	CHECK(ops.channels.empty());
	OperatorMatrix const H = build_hamiltonian(c);
	std::vector<OperatorMatrix> const only_h;
	Liouvillian const coherent = build_liouvillian(H, only_h);
	// the only dissipator left is kappa_ext D[a]
	std::vector<OperatorMatrix> const ext = {std::sqrt(2.0) * embed(fock_destroy(3), 0, c.layout)};
	Liouvillian const with_ext = build_liouvillian(H, ext);
	Liouvillian const full = build_liouvillian(H, ops.all());
	CHECK(max_abs(full.matrix - with_ext.matrix) < 1e-13);
	CHECK(max_abs(coherent.matrix + coherent.matrix.adjoint()) < 1e-12);
}

TEST_CASE("monitored drive reproduces the driven-cavity master equation")
{
	SystemConfig c;
	c.resonator = {5000.0, 3.0, 5.0};
	c.probe = {4996.0, Complex(0.7, 0.2)};
	c.layout = {4, 0};
	CollapseSet const ops = build_collapse_ops(c);
	Liouvillian const slh = build_liouvillian(build_hamiltonian(c), ops.all());

	OperatorMatrix const a = fock_destroy(4);
	OperatorMatrix const ad = a.adjoint();
	Complex const alpha = c.probe.alpha;
	double const ke = c.resonator.kappa_ext;
	OperatorMatrix const H = (c.resonator.omega_r - c.probe.omega_p) * ad * a +
		Complex(0, 1) * std::sqrt(ke) * (std::conj(alpha) * a - alpha * ad);
	std::vector<OperatorMatrix> const loss = {std::sqrt(c.resonator.kappa_total()) * a};
	Liouvillian const textbook = build_liouvillian(H, loss);
	CHECK(max_abs(slh.matrix - textbook.matrix) < 1e-12);
}

TEST_CASE("parameter paths")
{
	SystemConfig c = one_qubit();
	CHECK(get_parameter(c, "resonator.omega_r") == 5170.0);
	CHECK(get_parameter(c, "dqds[0].two_t") == 5166.0);
	CHECK(get_parameter(c, "dqds[0].gamma2_star") == doctest::Approx(5.3));
	CHECK(get_parameter(c, "couplings[0]") == 53.4);

	set_parameter(c, "dqds[0].two_t", 5000.0);
	CHECK(c.dqds[0].t == 2500.0);
	c.dqds[0].gamma_phi = 1.0;
	set_parameter(c, "dqds[0].gamma2_star", 4.0);
	CHECK(c.dqds[0].gamma1 == doctest::Approx(6.0));
	CHECK(c.dqds[0].gamma_phi == 1.0);

	CHECK_THROWS_AS(get_parameter(c, "dqds[1].delta"), ConfigError);
	CHECK_THROWS_AS(get_parameter(c, "resonator.q"), ConfigError);
	CHECK_THROWS_AS(set_parameter(c, "not a path", 1.0), ConfigError);
}

TEST_CASE("validate names the field")
{
	SystemConfig c = one_qubit();
	c.dqds[0].t = -1.0;
	try
	{
		c.validate();
		FAIL("expected ConfigError");
	}
	catch (ConfigError const & e)
	{
		CHECK(e.field == "dqds[0].t");
	}
	c = one_qubit();
	c.couplings.push_back(3.0);
	CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("without_qubit")
{
	SystemConfig c = one_qubit();
	c.dqds.push_back(dqd(10.0, 4000.0));
	c.couplings.push_back(20.0);
	c.layout.num_qubits = 2;
	SystemConfig const r = without_qubit(c, 0);
	CHECK(r.layout.num_qubits == 1);
	CHECK(r.couplings == std::vector<double>{20.0});
	CHECK(r.dqds[0].delta == 10.0);
}
