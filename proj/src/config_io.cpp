#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqed/io.hpp"

namespace cqed
{
namespace
{

double number_at(Json const & obj, char const * key, std::string const & where, std::optional<double> fallback = {})
{
	std::string const field = where.empty() ? key : where + "." + key;
	if (!obj.contains(key))
	{
		if (fallback)
			return *fallback;
		throw ConfigError(field, "missing");
	}
	Json const & v = obj.at(key);
	if (!v.is_number())
		throw ConfigError(field, "expected a number");
	return v.get<double>();
}

Json const & object_at(Json const & obj, char const * key, std::string const & where)
{
	std::string const field = where.empty() ? key : where + "." + key;
	if (!obj.contains(key))
		throw ConfigError(field, "missing");
	if (!obj.at(key).is_object())
		throw ConfigError(field, "expected an object");
	return obj.at(key);
}

std::string mode_name(NoiseMode m)
{
	return m == NoiseMode::explicit_rates ? "explicit-rates" : "derived-from-spectrum";
}

}  // namespace

std::string format_number(double v)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.12g", v);
	return buf;
}

Json to_json(SystemConfig const & config)
{
	Json j;
	j["resonator"] = {
		{"omega_r", config.resonator.omega_r},
		{"kappa_int", config.resonator.kappa_int},
		{"kappa_ext", config.resonator.kappa_ext},
	};
	j["dqds"] = Json::array();
	for (auto const & d : config.dqds)
	{
		Json dj = {{"delta", d.delta}, {"t", d.t}, {"gamma1", d.gamma1}, {"gamma_phi", d.gamma_phi}};
		if (d.noise)
			dj["noise"] = {{"c0", d.noise->c0}, {"c_omega", d.noise->c_omega}, {"mode", mode_name(d.noise->mode)}};
		j["dqds"].push_back(dj);
	}
	j["couplings"] = config.couplings;
	Json alpha = config.probe.alpha.imag() == 0.0
		? Json(config.probe.alpha.real())
		: Json::array({config.probe.alpha.real(), config.probe.alpha.imag()});
	j["probe"] = {{"omega_p", config.probe.omega_p}, {"alpha", alpha}};
	j["layout"] = {{"fock_cutoff", config.layout.fock_cutoff}, {"num_qubits", config.layout.num_qubits}};
	j["rwa"] = config.rwa;
	return j;
}

SystemConfig config_from_json(Json const & j)
{
	if (!j.is_object())
		throw ConfigError("<root>", "expected a JSON object");
	SystemConfig c;

	Json const & res = object_at(j, "resonator", "");
	c.resonator.omega_r = number_at(res, "omega_r", "resonator");
	c.resonator.kappa_int = number_at(res, "kappa_int", "resonator");
	c.resonator.kappa_ext = number_at(res, "kappa_ext", "resonator");

	if (j.contains("dqds"))
	{
		if (!j["dqds"].is_array())
			throw ConfigError("dqds", "expected an array");
		for (std::size_t k = 0; k < j["dqds"].size(); ++k)
		{
			std::string const where = "dqds[" + std::to_string(k) + "]";
			Json const & dj = j["dqds"][k];
			if (!dj.is_object())
				throw ConfigError(where, "expected an object");
			DqdParams d;
			d.delta = number_at(dj, "delta", where);
			d.t = number_at(dj, "t", where);
			d.gamma1 = number_at(dj, "gamma1", where, 0.0);
			d.gamma_phi = number_at(dj, "gamma_phi", where, 0.0);
			if (dj.contains("noise"))
			{
				Json const & nj = object_at(dj, "noise", where);
				NoiseSpectrum n;
				n.c0 = number_at(nj, "c0", where + ".noise");
				n.c_omega = number_at(nj, "c_omega", where + ".noise");
				std::string const mode = nj.value("mode", std::string("derived-from-spectrum"));
				if (mode == "explicit-rates")
					n.mode = NoiseMode::explicit_rates;
				else if (mode == "derived-from-spectrum")
					n.mode = NoiseMode::derived_from_spectrum;
				else
					throw ConfigError(where + ".noise.mode", "expected 'explicit-rates' or 'derived-from-spectrum'");
				d.noise = n;
			}
			c.dqds.push_back(d);
		}
	}
	if (j.contains("couplings"))
	{
		if (!j["couplings"].is_array())
			throw ConfigError("couplings", "expected an array");
		for (std::size_t k = 0; k < j["couplings"].size(); ++k)
		{
			if (!j["couplings"][k].is_number())
				throw ConfigError("couplings[" + std::to_string(k) + "]", "expected a number");
			c.couplings.push_back(j["couplings"][k].get<double>());
		}
	}

	c.probe.omega_p = c.resonator.omega_r;
	if (j.contains("probe"))
	{
		Json const & pj = object_at(j, "probe", "");
		c.probe.omega_p = number_at(pj, "omega_p", "probe", c.resonator.omega_r);
		if (pj.contains("alpha"))
		{
			Json const & a = pj["alpha"];
			if (a.is_number())
				c.probe.alpha = a.get<double>();
			else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number())
				c.probe.alpha = Complex(a[0].get<double>(), a[1].get<double>());
			else
				throw ConfigError("probe.alpha", "expected a number or [re, im]");
		}
	}

	c.layout.num_qubits = c.num_qubits();
	if (j.contains("layout"))
	{
		Json const & lj = object_at(j, "layout", "");
		double const cutoff = number_at(lj, "fock_cutoff", "layout", 5.0);
		if (cutoff != std::floor(cutoff))
			throw ConfigError("layout.fock_cutoff", "expected an integer");
		c.layout.fock_cutoff = static_cast<int>(cutoff);
		c.layout.num_qubits = static_cast<int>(number_at(lj, "num_qubits", "layout", c.num_qubits()));
	}
	if (j.contains("rwa"))
	{
		if (!j["rwa"].is_boolean())
			throw ConfigError("rwa", "expected a boolean");
		c.rwa = j["rwa"].get<bool>();
	}
	c.validate();
	return c;
}

SystemConfig load_config(std::filesystem::path const & path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError(path.string(), "cannot open config file");
	Json j;
	try
	{
		j = Json::parse(in);
	}
	catch (Json::parse_error const & e)
	{
		throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
	}
	return config_from_json(j);
}

Json to_json(FitResult const & result)
{
	Json j;
	j["stage"] = result.stage;
	j["converged"] = result.converged;
	j["residual_norm"] = result.residual_norm;
	j["initial_residual_norm"] = result.initial_residual_norm;
	j["reduced_chi2"] = result.reduced_chi2;
	j["iterations"] = result.iterations;
	j["evaluations"] = result.evaluations;
	j["failed_evaluations"] = result.failed_evaluations;
	if (!result.diagnostics.empty())
		j["diagnostics"] = result.diagnostics;
	j["parameters"] = Json::array();
	for (auto const & p : result.parameters)
		j["parameters"].push_back({
			{"parameter", p.name},
			{"value", p.value},
			{"uncertainty", p.uncertainty},
			{"fixed", p.fixed},
			{"stage", p.stage},
		});
	j["fitted_config"] = to_json(result.fitted);
	return j;
}

Json to_json(EigenTriple const & triple)
{
	Json j;
	j["energies"] = std::vector<double>(triple.energies.data(), triple.energies.data() + 3);
	j["basis"] = {"|e,g,0>", "|g,g,1>", "|g,e,0>"};
	j["states"] = Json::array();
	for (int c = 0; c < 3; ++c)
	{
		Json s = Json::array();
		for (int r = 0; r < 3; ++r)
			s.push_back({triple.states(r, c).real(), triple.states(r, c).imag()});
		j["states"].push_back(s);
	}
	j["resonator_weight"] = std::vector<double>(triple.resonator_weight.data(), triple.resonator_weight.data() + 3);
	j["drive_brightness"] = std::vector<double>(triple.drive_brightness.data(), triple.drive_brightness.data() + 3);
	return j;
}

Json to_json(DarkStateReport const & report)
{
	Json j;
	j["rows"] = Json::array();
	for (auto const & r : report.rows)
		j["rows"].push_back({
			{"delta_r", r.delta_r},
			{"dark_energy", r.dark_energy},
			{"bright_energy", r.bright_energy},
			{"bright_perturbative", r.bright_perturbative},
			{"bright_resonator_amplitude", r.bright_resonator_amplitude},
			{"bright_resonator_weight", r.bright_resonator_weight},
			{"exact_splitting", r.exact_splitting},
		});
	j["dark_variation"] = report.dark_variation;
	j["tolerance"] = report.tolerance;
	j["dark_fixed"] = report.dark_fixed;
	return j;
}

void write_atomic(std::filesystem::path const & path, std::string const & text)
{
	std::filesystem::path tmp = path;
	tmp += ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out)
			throw Error("cannot write " + tmp.string());
		out << text;
		if (!out)
			throw Error("write failed for " + tmp.string());
	}
	std::filesystem::rename(tmp, path);
}

}  // namespace cqed
