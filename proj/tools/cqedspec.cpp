// cqedspec: simulate, sweep, analyse and fit reflection spectra of DQDs coupled to a resonator.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cqed/eigen_analysis.hpp"
#include "cqed/io.hpp"
#include "cqed/svg_plot.hpp"

namespace fs = std::filesystem;
using namespace cqed;

namespace
{

constexpr char const * tool_version = "0.1.0";

struct UsageError : std::runtime_error
{
	using std::runtime_error::runtime_error;
};

struct Run
{
	std::string command;
	std::string config_path;
	fs::path out = ".";
	std::uint64_t seed = 1;
	int workers = 1;
	std::vector<std::string> files;
	std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

	void write(std::string const & name, std::string const & text)
	{
		write_atomic(out / name, text);
		files.push_back(name);
	}

	void finish()
	{
		double const seconds =
			std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		Json m;
		m["command"] = command;
		m["config"] = config_path;
		m["out"] = out.string();
		m["seed"] = seed;
		m["workers"] = workers;
		m["version"] = tool_version;
		m["duration_s"] = seconds;
		m["files"] = files;
		write_atomic(out / "manifest.json", m.dump(2) + "\n");
	}
};

Json read_json(fs::path const & path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError(path.string(), "cannot open");
	try
	{
		return Json::parse(in);
	}
	catch (Json::parse_error const & e)
	{
		throw ConfigError(path.string(), std::string("invalid JSON: ") + e.what());
	}
}

// Config errors from a file get the file name in front of the field path.
template<typename F>
auto in_file(fs::path const & path, F && f)
{
	try
	{
		return f();
	}
	catch (ConfigError const & e)
	{
		throw ConfigError(path.string() + ": " + e.field, std::string(e.what()).substr(e.field.size() + 2));
	}
}

// A flag given on the command line wins over the recipe, even when it is empty.
std::optional<std::string> recipe_string(Json const & recipe, char const * key, std::optional<std::string> const & flag)
{
	if (flag)
		return flag;
	if (recipe.contains(key) && recipe[key].is_string())
		return recipe[key].get<std::string>();
	return std::nullopt;
}

std::vector<double> require_grid(Json const & recipe, std::optional<std::string> const & flag)
{
	auto const spec = recipe_string(recipe, "grid", flag);
	if (!spec)
		throw UsageError("a probe grid is required (--grid \"start:stop:count\" or \"grid\" in the config)");
	if (spec->empty())
		throw UsageError("empty --grid");
	return parse_grid(*spec);
}

std::string numbered(std::string const & stem, std::size_t i, std::string const & ext)
{
	char buf[16];
	std::snprintf(buf, sizeof buf, "_%03zu", i);
	return stem + buf + ext;
}

std::string measured_to_csv(MeasuredTrace const & m)
{
	std::string out = "x,y,sigma\n";
	for (std::size_t i = 0; i < m.x.size(); ++i)
		out += format_number(m.x[i]) + ',' + format_number(m.y[i]) + ',' + format_number(m.sigma) + '\n';
	return out;
}

struct PhaseOptions
{
	double scale = 1.0;
	double offset = 0.0;
};

PhaseOptions phase_options(Json const & recipe)
{
	PhaseOptions p;
	if (recipe.contains("phase") && recipe["phase"].is_object())
	{
		p.scale = recipe["phase"].value("scale", 1.0);
		p.offset = recipe["phase"].value("offset", 0.0);
	}
	return p;
}

// simulate / sweep -------------------------------------------------------------------

struct SimulateArgs
{
	std::string config;
	std::optional<std::string> grid, sweep;
	bool phase = false;
};

void cmd_simulate(Run & run, SimulateArgs const & a)
{
	Json const recipe = read_json(a.config);
	SystemConfig const config = in_file(a.config, [&] { return config_from_json(recipe); });
	std::vector<double> const grid = in_file(a.config, [&] { return require_grid(recipe, a.grid); });

	if (a.phase)
	{
		PhaseOptions const p = phase_options(recipe);
		PhaseTrace const t = qubit_spectroscopy_trace(config, grid, p.scale, p.offset, run.workers);
		MeasuredTrace m{t.probe_freqs, t.values, 0.0, TraceKind::phase_shift};
		run.write("phase.csv", measured_to_csv(m));
		if (!t.dispersive_ok)
			std::cerr << "warning: a DQD is within 3 g of the resonator; the dispersive picture does not apply\n";
		return;
	}
	run.write("trace.csv", trace_to_csv(spectrum_trace(config, grid, run.workers)));
}

void cmd_sweep(Run & run, SimulateArgs const & a)
{
	Json const recipe = read_json(a.config);
	SystemConfig const config = in_file(a.config, [&] { return config_from_json(recipe); });
	std::vector<double> const grid = in_file(a.config, [&] { return require_grid(recipe, a.grid); });
	auto const sweep_text = recipe_string(recipe, "sweep", a.sweep);
	if (!sweep_text)
		throw UsageError("a sweep is required (--sweep \"param=start:stop:count\" or \"sweep\" in the config)");
	SweepSpec const sweep = parse_sweep(*sweep_text);

	std::string index = "index,parameter,value,file\n";
	if (a.phase)
	{
		PhaseOptions const p = phase_options(recipe);
		for (std::size_t i = 0; i < sweep.values.size(); ++i)
		{
			SystemConfig c = config;
			set_parameter(c, sweep.path, sweep.values[i]);
			PhaseTrace const t = qubit_spectroscopy_trace(c, grid, p.scale, p.offset, run.workers);
			std::string const name = numbered("phase", i, ".csv");
			run.write(name, measured_to_csv({t.probe_freqs, t.values, 0.0, TraceKind::phase_shift}));
			index += std::to_string(i) + ',' + sweep.path + ',' + format_number(sweep.values[i]) + ',' + name + '\n';
		}
	}
	else
	{
		std::vector<SpectrumTrace> const traces = sweep_2d(config, sweep, grid, run.workers);
		for (std::size_t i = 0; i < traces.size(); ++i)
		{
			std::string const name = numbered("trace", i, ".csv");
			run.write(name, trace_to_csv(traces[i]));
			index += std::to_string(i) + ',' + sweep.path + ',' + format_number(sweep.values[i]) + ',' + name + '\n';
		}
	}
	run.write("index.csv", index);
}

// eigen ---------------------------------------------------------------------------------

struct EigenArgs
{
	std::string config;
	std::optional<double> g1, g2;
	std::string delta_r;
	std::string convention;
};

void cmd_eigen(Run & run, EigenArgs const & a)
{
	Json recipe = Json::object();
	if (!a.config.empty())
		recipe = read_json(a.config);
	Json const section = recipe.contains("eigen") ? recipe["eigen"] : Json::object();

	auto pick = [&](std::optional<double> flag, char const * key) {
		if (flag)
			return *flag;
		if (section.contains(key) && section[key].is_number())
			return section[key].get<double>();
		throw UsageError(std::string("--") + key + " is required");
	};
	double const g1 = pick(a.g1, "g1");
	double const g2 = pick(a.g2, "g2");
	std::string const conv_name =
		!a.convention.empty() ? a.convention : section.value("convention", std::string("dressed"));
	ExchangeConvention const convention = parse_convention(conv_name);
	std::string const dr_spec =
		!a.delta_r.empty() ? a.delta_r : section.value("delta_r", std::string());

	Json report;
	report["g1"] = g1;
	report["g2"] = g2;
	report["g_c"] = std::hypot(g1, g2);
	report["convention"] = to_string(convention);
	if (g1 != 0.0 || g2 != 0.0)
		report["resonant_triplet"] = to_json(resonant_triplet(g1, g2));

	if (!dr_spec.empty())
	{
		std::vector<double> const delta_r = parse_grid(dr_spec);
		std::vector<std::pair<double, double>> points;
		Json rows = Json::array();
		std::string csv = "delta_r_MHz,two_j_MHz\n";
		DarkStateReport const dark = dark_state_fixed_frequency_check(g1, g2, delta_r);
		for (std::size_t i = 0; i < delta_r.size(); ++i)
		{
			double const dr = delta_r[i];
			double const exact = convention == ExchangeConvention::dressed_resonant
				? exact_anticrossing(g1, g2, dr).gap
				: dark.rows[i].exact_splitting;
			points.emplace_back(dr, exact);
			rows.push_back({{"delta_r", dr}, {"two_j_exact", exact},
				{"two_j_perturbative", exchange_splitting(g1, g2, dr, convention)}});
			csv += format_number(dr) + ',' + format_number(exact) + '\n';
		}
		report["exchange"] = rows;
		if (points.size() >= 2)
		{
			ScalingFit const fit = exchange_scaling_fit(points);
			double const closed = convention == ExchangeConvention::dressed_resonant ? 2 * g1 * g2 : g1 * g1 + g2 * g2;
			report["scaling_fit"] = {{"amplitude", fit.amplitude}, {"relative_residual", fit.relative_residual},
				{"closed_form", closed}};
		}
		report["dark_state"] = to_json(dark);
		run.write("exchange.csv", csv);
	}
	run.write("eigen.json", report.dump(2) + "\n");
	std::cout << "g_c = " << format_number(std::hypot(g1, g2)) << " MHz\n";
}

// synth ---------------------------------------------------------------------------------

struct SynthArgs
{
	std::string config;
	std::optional<std::string> grid, sweep;
	double sigma = 0.0;
	bool relative = false;
	bool phase = false;
};

double contrast(SpectrumTrace const & t)
{
	double lo = 1e300, hi = -1e300;
	for (Complex s : t.s11)
	{
		lo = std::min(lo, std::abs(s));
		hi = std::max(hi, std::abs(s));
	}
	return hi - lo;
}

void cmd_synth(Run & run, SynthArgs const & a)
{
	Json const recipe = read_json(a.config);
	SystemConfig const config = in_file(a.config, [&] { return config_from_json(recipe); });
	std::vector<double> const grid = in_file(a.config, [&] { return require_grid(recipe, a.grid); });
	if (a.sigma < 0)
		throw ConfigError("sigma", "must be >= 0");

	if (a.phase)
	{
		if (a.relative)
			throw UsageError("--relative is only supported for reflection data");
		PhaseOptions const p = phase_options(recipe);
		MeasuredTrace const m =
			synthesize_phase_trace(config, grid, p.scale, p.offset, a.sigma, run.seed, run.workers);
		run.write("synth_phase.csv", measured_to_csv(m));
		run.write("truth.json", to_json(config).dump(2) + "\n");
		return;
	}

	auto const sweep_text = recipe_string(recipe, "sweep", a.sweep);
	SweepSpec const sweep = sweep_text ? parse_sweep(*sweep_text) : SweepSpec{};
	double sigma = a.sigma;
	if (a.relative)
	{
		std::vector<SpectrumTrace> const clean = synthesize_dataset(config, sweep, grid, 0.0, run.seed, run.workers);
		double c = 0.0;
		for (auto const & t : clean)
			c = std::max(c, contrast(t));
		sigma *= c;
	}
	std::vector<SpectrumTrace> const traces = synthesize_dataset(config, sweep, grid, sigma, run.seed, run.workers);
	if (sweep.path.empty())
		run.write("synth.csv", trace_to_csv(traces.front()));
	else
	{
		std::string index = "index,parameter,value,file\n";
		for (std::size_t i = 0; i < traces.size(); ++i)
		{
			std::string const name = numbered("synth", i, ".csv");
			run.write(name, trace_to_csv(traces[i]));
			index += std::to_string(i) + ',' + sweep.path + ',' + format_number(sweep.values[i]) + ',' + name + '\n';
		}
		run.write("index.csv", index);
	}
	Json truth = to_json(config);
	truth["sigma"] = sigma;
	truth["seed"] = run.seed;
	run.write("truth.json", truth.dump(2) + "\n");
}

// fit -----------------------------------------------------------------------------------

struct FitArgs
{
	std::string problem;
	std::vector<std::string> data;
	std::string truth;
};

MinimizeOptions read_options(Json const & j, MinimizeOptions o, std::uint64_t seed)
{
	o.seed = seed;
	if (!j.is_object())
		return o;
	auto integer = [&](char const * key, int fallback) {
		if (!j.contains(key))
			return fallback;
		if (!j[key].is_number_integer())
			throw ConfigError(std::string("options.") + key, "expected an integer");
		return j[key].get<int>();
	};
	o.restarts = integer("restarts", o.restarts);
	o.max_evaluations = integer("max_evaluations", o.max_evaluations);
	if (j.contains("tolerance"))
	{
		if (!j["tolerance"].is_number())
			throw ConfigError("options.tolerance", "expected a number");
		o.tolerance = j["tolerance"].get<double>();
	}
	if (j.contains("polish"))
		o.polish = j["polish"].get<bool>();
	if (j.contains("seed"))
		o.seed = j["seed"].get<std::uint64_t>();
	return o;
}

double number_field(Json const & j, char const * key, std::string const & where, double fallback)
{
	if (!j.contains(key))
		return fallback;
	if (!j[key].is_number())
		throw ConfigError(where + "." + key, "expected a number");
	return j[key].get<double>();
}

std::vector<FitProblem> read_problem(
	Json const & j, fs::path const & base, std::vector<std::string> const & data, std::uint64_t seed, SystemConfig & model)
{
	if (!j.is_object())
		throw ConfigError("<root>", "expected a JSON object");
	if (!j.contains("model"))
		throw ConfigError("model", "missing");
	if (j["model"].is_string())
	{
		fs::path const p = base / j["model"].get<std::string>();
		model = in_file(p, [&] { return config_from_json(read_json(p)); });
	}
	else
	{
		try
		{
			model = config_from_json(j["model"]);
		}
		catch (ConfigError const & e)
		{
			throw ConfigError("model." + e.field, std::string(e.what()).substr(e.field.size() + 2));
		}
	}
	MinimizeOptions const options = read_options(j.value("options", Json::object()), {}, seed);
	int const workers = 1;

	if (!j.contains("stages") || !j["stages"].is_array() || j["stages"].empty())
		throw ConfigError("stages", "expected a non-empty array");
	std::size_t next_data = 0;
	std::vector<FitProblem> stages;
	for (std::size_t s = 0; s < j["stages"].size(); ++s)
	{
		std::string const where = "stages[" + std::to_string(s) + "]";
		Json const & sj = j["stages"][s];
		if (!sj.is_object())
			throw ConfigError(where, "expected an object");
		FitProblem stage;
		stage.stage = sj.value("name", "stage" + std::to_string(s + 1));
		stage.options = read_options(sj.value("options", Json::object()), options, options.seed);
		stage.workers = workers;

		if (!sj.contains("free") || !sj["free"].is_array())
			throw ConfigError(where + ".free", "expected an array");
		for (std::size_t f = 0; f < sj["free"].size(); ++f)
		{
			std::string const fw = where + ".free[" + std::to_string(f) + "]";
			Json const & fj = sj["free"][f];
			if (!fj.is_object() || !fj.contains("path") || !fj["path"].is_string())
				throw ConfigError(fw + ".path", "missing");
			FreeParameter p;
			p.path = fj["path"].get<std::string>();
			bool const nuisance = p.path.rfind("scale[", 0) == 0 || p.path.rfind("offset[", 0) == 0;
			double current = 0.0;
			if (!nuisance)
			{
				try
				{
					current = get_parameter(model, p.path);
				}
				catch (ConfigError const & e)
				{
					throw ConfigError(fw + ".path", e.what());
				}
			}
			p.initial = number_field(fj, "initial", fw, current);
			p.lower = number_field(fj, "lower", fw, -1e300);
			p.upper = number_field(fj, "upper", fw, 1e300);
			p.step = number_field(fj, "step", fw, 0.0);
			stage.free.push_back(p);
		}

		if (!sj.contains("traces") || !sj["traces"].is_array() || sj["traces"].empty())
			throw ConfigError(where + ".traces", "expected a non-empty array");
		for (std::size_t t = 0; t < sj["traces"].size(); ++t)
		{
			std::string const tw = where + ".traces[" + std::to_string(t) + "]";
			Json const & tj = sj["traces"][t];
			if (!tj.is_object())
				throw ConfigError(tw, "expected an object");
			TraceKind const kind = parse_trace_kind(tj.value("kind", std::string("reflection-magnitude")));
			fs::path file;
			if (next_data < data.size())
				file = data[next_data++];
			else if (tj.contains("file") && tj["file"].is_string())
				file = base / tj["file"].get<std::string>();
			else
				throw ConfigError(tw + ".file", "missing and no data file given on the command line");
			FitTrace ft;
			ft.trace = read_trace_csv(file, kind).measured;
			ft.trace.kind = kind;
			if (tj.contains("sigma"))
				ft.trace.sigma = number_field(tj, "sigma", tw, 0.0);
			if (tj.contains("overrides"))
			{
				if (!tj["overrides"].is_object())
					throw ConfigError(tw + ".overrides", "expected an object");
				for (auto const & [path, value] : tj["overrides"].items())
				{
					if (!value.is_number())
						throw ConfigError(tw + ".overrides." + path, "expected a number");
					SystemConfig probe = model;
					try
					{
						set_parameter(probe, path, value.get<double>());
					}
					catch (ConfigError const & e)
					{
						throw ConfigError(tw + ".overrides." + path, e.what());
					}
					ft.overrides.emplace_back(path, value.get<double>());
				}
			}
			stage.traces.push_back(std::move(ft));
		}
		stages.push_back(std::move(stage));
	}
	return stages;
}

int cmd_fit(Run & run, FitArgs const & a)
{
	fs::path const problem_path = a.problem;
	Json const j = read_json(problem_path);
	SystemConfig model;
	std::vector<FitProblem> stages = in_file(problem_path,
		[&] { return read_problem(j, problem_path.parent_path(), a.data, run.seed, model); });
	for (auto & s : stages)
		s.workers = run.workers;

	std::vector<FitResult> const results = staged_fit(model, std::move(stages));
	FitResult const & last = results.back();

	Json out;
	out["stages"] = Json::array();
	for (auto const & r : results)
		out["stages"].push_back(to_json(r));
	out["parameters"] = to_json(last)["parameters"];
	bool converged = true;
	for (auto const & r : results)
		converged = converged && r.converged;
	out["converged"] = converged;

	if (!a.truth.empty())
	{
		SystemConfig const truth = in_file(a.truth, [&] { return config_from_json(read_json(a.truth)); });
		Json table = Json::array();
		for (auto const & p : last.parameters)
		{
			if (p.name.rfind("scale[", 0) == 0 || p.name.rfind("offset[", 0) == 0)
				continue;
			double const t = get_parameter(truth, p.name);
			double const z = p.uncertainty > 0 ? (p.value - t) / p.uncertainty : 0.0;
			table.push_back({{"parameter", p.name}, {"truth", t}, {"value", p.value}, {"uncertainty", p.uncertainty},
				{"z", z}, {"relative_error", t != 0 ? (p.value - t) / t : p.value - t}, {"fixed", p.fixed}});
		}
		out["comparison"] = table;
	}
	run.write("fit.json", out.dump(2) + "\n");
	run.write("fitted_model.json", to_json(last.fitted).dump(2) + "\n");

	for (auto const & p : last.parameters)
		std::cout << p.name << " = " << format_number(p.value) << (p.fixed ? " *" : " +/- " + format_number(p.uncertainty))
				  << '\n';
	for (auto const & r : results)
		if (r.diagnostics.rfind("diverged", 0) == 0)
		{
			std::cerr << "fit stage '" << r.stage << "': " << r.diagnostics << '\n';
			return 1;
		}
	return 0;
}

// plot ----------------------------------------------------------------------------------

struct PlotArgs
{
	std::vector<std::string> inputs;
	std::string style = "magnitude";
	int minima = 0;
};

std::vector<std::pair<double, double>> read_pairs(fs::path const & path)
{
	std::ifstream in(path);
	if (!in)
		throw ConfigError(path.string(), "cannot open");
	std::string line;
	std::getline(in, line);
	if (line != "delta_r_MHz,two_j_MHz")
		throw ConfigError(path.string() + ":1", "expected header 'delta_r_MHz,two_j_MHz'");
	std::vector<std::pair<double, double>> out;
	int lineno = 1;
	while (std::getline(in, line))
	{
		++lineno;
		if (line.empty())
			continue;
		double x = 0, y = 0;
		char comma = 0;
		std::istringstream row(line);
		if (!(row >> x >> comma >> y) || comma != ',')
			throw ConfigError(path.string() + ":" + std::to_string(lineno), "expected two numbers");
		out.emplace_back(x, y);
	}
	return out;
}

void cmd_plot(Run & run, PlotArgs const & a)
{
	if (a.inputs.empty())
		throw UsageError("no input files");
	for (auto const & input : a.inputs)
	{
		fs::path const path = input;
		std::string const name = path.stem().string() + ".svg";
		if (a.style == "exchange")
		{
			auto const points = read_pairs(path);
			run.write(name, render_svg(exchange_plot(points, exchange_scaling_fit(points))));
			continue;
		}
		TraceTable const table = read_trace_csv(path, a.style == "phase" ? TraceKind::phase_shift
																		  : TraceKind::reflection_magnitude);
		MeasuredTrace m = table.measured;
		if (a.style == "phase")
		{
			m.kind = TraceKind::phase_shift;
			if (table.full_schema)
				for (std::size_t i = 0; i < m.y.size(); ++i)
					m.y[i] = std::arg(table.s11[i]);
		}
		else if (a.style != "magnitude")
			throw UsageError("unknown style '" + a.style + "'");
		run.write(name, render_svg(trace_plot(m, path.filename().string(), a.minima)));
	}
}

}  // namespace

int main(int argc, char ** argv)
{
	CLI::App app{"Reflection spectroscopy of DQD charge qubits coupled to a microwave resonator"};
	app.require_subcommand(1);
	app.set_version_flag("--version", tool_version);

	Run run;
	std::string out = ".";
	auto common = [&](CLI::App * sub) {
		sub->add_option("--out", out, "output directory")->capture_default_str();
		sub->add_option("--seed", run.seed, "random seed")->capture_default_str();
		sub->add_option("--workers", run.workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
	};

	SimulateArgs sim;
	auto * simulate = app.add_subcommand("simulate", "S11 trace over a probe grid");
	simulate->add_option("--config", sim.config, "config JSON")->required();
	simulate->add_option("--grid", sim.grid, "probe grid \"start:stop:count\" (MHz)");
	simulate->add_flag("--phase", sim.phase, "qubit-spectroscopy phase shift instead of S11");
	common(simulate);

	SimulateArgs swp;
	auto * sweep = app.add_subcommand("sweep", "one S11 trace per value of a swept parameter");
	sweep->add_option("--config", swp.config, "config JSON")->required();
	sweep->add_option("--grid", swp.grid, "probe grid \"start:stop:count\" (MHz)");
	sweep->add_option("--sweep", swp.sweep, "\"param=start:stop:count\"");
	sweep->add_flag("--phase", swp.phase, "qubit-spectroscopy phase shift instead of S11");
	common(sweep);

	EigenArgs eig;
	auto * eigen = app.add_subcommand("eigen", "one-excitation eigenstates and exchange splitting");
	eigen->add_option("--config", eig.config, "JSON with an \"eigen\" section");
	eigen->add_option("--g1", eig.g1, "coupling of DQD 1 (MHz)");
	eigen->add_option("--g2", eig.g2, "coupling of DQD 2 (MHz)");
	eigen->add_option("--delta-r", eig.delta_r, "resonator detunings \"start:stop:count\" (MHz)");
	eigen->add_option("--convention", eig.convention, "exchange convention")
		->check(CLI::IsMember({"dressed", "bare"}));
	common(eigen);

	FitArgs fa;
	auto * fit = app.add_subcommand("fit", "staged master-equation fit");
	fit->add_option("--config", fa.problem, "fit problem JSON")->required();
	fit->add_option("data", fa.data, "data CSVs, replacing the trace files of the problem in order");
	fit->add_option("--truth", fa.truth, "config JSON to compare the estimates against");
	common(fit);

	SynthArgs sa;
	auto * synth = app.add_subcommand("synth", "noisy synthetic dataset");
	synth->add_option("--config", sa.config, "config JSON")->required();
	synth->add_option("--grid", sa.grid, "probe grid \"start:stop:count\" (MHz)");
	synth->add_option("--sweep", sa.sweep, "\"param=start:stop:count\"");
	synth->add_option("--sigma", sa.sigma, "Gaussian noise on Re and Im S11 (or on the phase)");
	synth->add_flag("--relative", sa.relative, "sigma is a fraction of the |S11| contrast");
	synth->add_flag("--phase", sa.phase, "phase-shift data instead of S11");
	common(synth);

	PlotArgs pa;
	auto * plot = app.add_subcommand("plot", "SVG line plots of trace CSVs");
	plot->add_option("inputs", pa.inputs, "CSV files")->required();
	plot->add_option("--style", pa.style, "magnitude, phase or exchange")
		->check(CLI::IsMember({"magnitude", "phase", "exchange"}));
	plot->add_option("--minima", pa.minima, "annotate this many fitted minima");
	common(plot);

	try
	{
		app.parse(argc, argv);
	}
	catch (CLI::ParseError const & e)
	{
		int const code = app.exit(e);
		return code == 0 ? 0 : 2;
	}

	try
	{
		run.out = out;
		fs::create_directories(run.out);
		int code = 0;
		if (simulate->parsed())
		{
			run.command = "simulate", run.config_path = sim.config;
			cmd_simulate(run, sim);
		}
		else if (sweep->parsed())
		{
			run.command = "sweep", run.config_path = swp.config;
			cmd_sweep(run, swp);
		}
		else if (eigen->parsed())
		{
			run.command = "eigen", run.config_path = eig.config;
			cmd_eigen(run, eig);
		}
		else if (fit->parsed())
		{
			run.command = "fit", run.config_path = fa.problem;
			code = cmd_fit(run, fa);
		}
		else if (synth->parsed())
		{
			run.command = "synth", run.config_path = sa.config;
			cmd_synth(run, sa);
		}
		else if (plot->parsed())
		{
			run.command = "plot";
			cmd_plot(run, pa);
		}
		run.finish();
		return code;
	}
	catch (UsageError const & e)
	{
		std::cerr << "usage error: " << e.what() << '\n';
		return 2;
	}
	catch (ConfigError const & e)
	{
		std::cerr << "config error: " << e.what() << '\n';
		return 2;
	}
	catch (FitInitError const & e)
	{
		std::cerr << "fit error: " << e.what() << '\n';
		return 1;
	}
	catch (std::exception const & e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
}
