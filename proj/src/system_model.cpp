#include "cqed/system_model.hpp"

#include <cmath>
#include <regex>

namespace cqed
{
namespace
{

void require(bool ok, std::string const & field, char const * what)
{
	if (!ok)
		throw ConfigError(field, what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void SystemConfig::validate() const
{
	require(finite(resonator.omega_r), "resonator.omega_r", "must be finite");
	require(finite(resonator.kappa_int) && resonator.kappa_int >= 0, "resonator.kappa_int", "must be >= 0");
	require(finite(resonator.kappa_ext) && resonator.kappa_ext > 0, "resonator.kappa_ext", "must be > 0");
	require(dqds.size() <= 2, "dqds", "at most two DQDs are supported");
	require(couplings.size() == dqds.size(), "couplings", "length must equal the number of DQDs");
	for (std::size_t k = 0; k < dqds.size(); ++k)
	{
		std::string const base = "dqds[" + std::to_string(k) + "]";
		auto const & d = dqds[k];
		require(finite(d.delta), base + ".delta", "must be finite");
		require(finite(d.t) && d.t > 0, base + ".t", "must be > 0");
		require(finite(d.gamma1) && d.gamma1 >= 0, base + ".gamma1", "must be >= 0");
		require(finite(d.gamma_phi) && d.gamma_phi >= 0, base + ".gamma_phi", "must be >= 0");
		if (d.noise)
		{
			require(finite(d.noise->c0) && d.noise->c0 >= 0, base + ".noise.c0", "must be >= 0");
			require(finite(d.noise->c_omega) && d.noise->c_omega >= 0, base + ".noise.c_omega", "must be >= 0");
		}
		require(finite(couplings[k]) && couplings[k] >= 0,
			"couplings[" + std::to_string(k) + "]", "must be >= 0");
	}
	require(finite(probe.omega_p), "probe.omega_p", "must be finite");
	require(finite(probe.alpha.real()) && finite(probe.alpha.imag()), "probe.alpha", "must be finite");
	require(layout.fock_cutoff >= 2, "layout.fock_cutoff", "must be >= 2");
	require(layout.num_qubits == num_qubits(), "layout.num_qubits", "must equal the number of DQDs");
	require(rwa || std::abs(probe.alpha) == 0.0, "rwa",
		"the probe term is only defined in the rotating frame; set alpha = 0 for rwa = false");
}

double qubit_frequency(DqdParams const & dqd)
{
	return std::hypot(2.0 * dqd.t, dqd.delta);
}

MixingAngle mixing_angle(DqdParams const & dqd)
{
	double const nu = qubit_frequency(dqd);
	if (nu == 0.0)
		throw DegenerateInput("mixing angle undefined at zero qubit frequency");
	return {2.0 * dqd.t / nu, dqd.delta / nu};
}

DecayRates decay_rates(DqdParams const & dqd, NoiseSpectrum const & noise)
{
	if (noise.mode == NoiseMode::explicit_rates)
		return {dqd.gamma1, dqd.gamma_phi};
	auto const [s, c] = mixing_angle(dqd);
	return {s * s * noise.c_omega, c * c * noise.c0};
}

DecayRates effective_rates(DqdParams const & dqd)
{
	return dqd.noise ? decay_rates(dqd, *dqd.noise) : DecayRates{dqd.gamma1, dqd.gamma_phi};
}

double effective_coupling(SystemConfig const & config, int k)
{
	return config.couplings.at(k) * mixing_angle(config.dqds.at(k)).sin_theta;
}

double alpha_for_photons(ResonatorParams const & resonator, double photons)
{
	// |<a>|^2 = kappa_ext |alpha|^2 / (kappa_tot / 2)^2 on resonance
	return std::sqrt(photons) * 0.5 * resonator.kappa_total() / std::sqrt(resonator.kappa_ext);
}

OperatorMatrix build_hamiltonian(SystemConfig const & config)
{
	if (!config.rwa && std::abs(config.probe.alpha) != 0.0)
		throw UnsupportedCombination("rwa = false with a nonzero probe: the probe term exists only in the rotating frame");
	config.validate();
	auto const & layout = config.layout;
	OperatorMatrix const a = embed(fock_destroy(layout.fock_cutoff), 0, layout);
	OperatorMatrix const adag = a.adjoint();
	OperatorMatrix const n = adag * a;

	double const frame = config.rwa ? config.probe.omega_p : 0.0;
	OperatorMatrix H = (config.resonator.omega_r - frame) * n;

	for (int k = 0; k < config.num_qubits(); ++k)
	{
		auto const & dqd = config.dqds[k];
		auto const [s, c] = mixing_angle(dqd);
		double const g = config.couplings[k];
		OperatorMatrix const sz = embed(pauli(PauliAxis::z), k + 1, layout);

		H -= 0.5 * (qubit_frequency(dqd) - frame) * sz;
		if (config.rwa)
		{
			OperatorMatrix const sm = embed(sigma_minus(), k + 1, layout);
			H += g * s * (sm * adag + sm.adjoint() * a);
		}
		else
		{
			OperatorMatrix const sx = embed(pauli(PauliAxis::x), k + 1, layout);
			H += g * (s * sx + c * sz) * (adag + a);
		}
	}

	if (config.rwa)
	{
		Complex const alpha = config.probe.alpha;
		Complex const prefactor = std::sqrt(config.resonator.kappa_ext) / Complex(0.0, 2.0);
		H += prefactor * (alpha * adag - std::conj(alpha) * a);
	}
	return H;
}

std::vector<OperatorMatrix> CollapseSet::all() const
{
	std::vector<OperatorMatrix> out = channels;
	out.push_back(scattering);
	return out;
}

CollapseSet build_collapse_ops(SystemConfig const & config)
{
	config.validate();
	auto const & layout = config.layout;
	OperatorMatrix const a = embed(fock_destroy(layout.fock_cutoff), 0, layout);

	CollapseSet set;
	for (int k = 0; k < config.num_qubits(); ++k)
	{
		auto const rates = effective_rates(config.dqds[k]);
		if (rates.gamma1 > 0)
			set.channels.push_back(std::sqrt(rates.gamma1) * embed(sigma_minus(), k + 1, layout));
		if (rates.gamma_phi > 0)
			set.channels.push_back(std::sqrt(0.5 * rates.gamma_phi) * embed(pauli(PauliAxis::z), k + 1, layout));
	}
	if (config.resonator.kappa_int > 0)
		set.channels.push_back(std::sqrt(config.resonator.kappa_int) * a);

	int const dim = layout.dimension();
	set.scattering = std::sqrt(config.resonator.kappa_ext) * a +
		config.probe.alpha * OperatorMatrix::Identity(dim, dim);
	return set;
}

namespace
{

struct ParsedPath
{
	std::string head;
	int index = -1;
	std::string field;
};

ParsedPath parse_path(std::string const & path)
{
	static std::regex const pattern(R"(^([a-z_]+)(?:\[(\d+)\])?(?:\.([a-z_0-9]+))?$)");
	std::smatch m;
	if (!std::regex_match(path, m, pattern))
		throw ConfigError(path, "not a parameter path");
	ParsedPath p;
	p.head = m[1];
	p.index = m[2].matched ? std::stoi(m[2]) : -1;
	p.field = m[3].matched ? std::string(m[3]) : std::string();
	return p;
}

template <typename Fn>
auto visit_parameter(SystemConfig & config, std::string const & path, Fn && fn)
{
	ParsedPath const p = parse_path(path);
	auto bad = [&]() { return ConfigError(path, "unknown parameter"); };
	auto index_ok = [&](std::size_t size) {
		if (p.index < 0 || static_cast<std::size_t>(p.index) >= size)
			throw ConfigError(path, "index out of range");
	};

	if (p.head == "resonator" && p.index < 0)
	{
		if (p.field == "omega_r")
			return fn(config.resonator.omega_r, 1.0);
		if (p.field == "kappa_int")
			return fn(config.resonator.kappa_int, 1.0);
		if (p.field == "kappa_ext")
			return fn(config.resonator.kappa_ext, 1.0);
		throw bad();
	}
	if (p.head == "probe" && p.index < 0)
	{
		if (p.field == "omega_p")
			return fn(config.probe.omega_p, 1.0);
		if (p.field == "alpha")
		{
			double re = config.probe.alpha.real();
			auto r = fn(re, 1.0);
			config.probe.alpha = Complex(re, 0.0);
			return r;
		}
		throw bad();
	}
	if (p.head == "couplings" && p.field.empty())
	{
		index_ok(config.couplings.size());
		return fn(config.couplings[p.index], 1.0);
	}
	if (p.head == "dqds")
	{
		index_ok(config.dqds.size());
		auto & d = config.dqds[p.index];
		if (p.field == "delta")
			return fn(d.delta, 1.0);
		if (p.field == "t")
			return fn(d.t, 1.0);
		if (p.field == "two_t")
			return fn(d.t, 2.0);
		if (p.field == "gamma1")
			return fn(d.gamma1, 1.0);
		if (p.field == "gamma_phi")
			return fn(d.gamma_phi, 1.0);
		if (p.field == "gamma2_star")
		{
			// gamma2* = gamma1 / 2 + gamma_phi, with gamma_phi held
			double g2 = d.gamma2_star();
			auto r = fn(g2, 1.0);
			d.gamma1 = 2.0 * (g2 - d.gamma_phi);
			return r;
		}
		throw bad();
	}
	throw bad();
}

}  // namespace

double get_parameter(SystemConfig const & config, std::string const & path)
{
	SystemConfig copy = config;
	return visit_parameter(copy, path, [](double & slot, double scale) { return scale * slot; });
}

void set_parameter(SystemConfig & config, std::string const & path, double value)
{
	visit_parameter(config, path, [value](double & slot, double scale) {
		slot = value / scale;
		return 0.0;
	});
}

SystemConfig without_qubit(SystemConfig const & config, int k)
{
	SystemConfig out = config;
	out.dqds.erase(out.dqds.begin() + k);
	out.couplings.erase(out.couplings.begin() + k);
	out.layout.num_qubits = out.num_qubits();
	return out;
}

}  // namespace cqed
