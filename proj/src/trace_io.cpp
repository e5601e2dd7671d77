#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cqed/io.hpp"

namespace cqed
{
namespace
{

std::vector<std::string> split(std::string const & s, char sep)
{
	std::vector<std::string> out;
	std::string cur;
	for (char ch : s)
	{
		if (ch == sep)
		{
			out.push_back(cur);
			cur.clear();
		}
		else
			cur.push_back(ch);
	}
	out.push_back(cur);
	return out;
}

std::string trim(std::string const & s)
{
	auto const b = s.find_first_not_of(" \t\r");
	if (b == std::string::npos)
		return {};
	auto const e = s.find_last_not_of(" \t\r");
	return s.substr(b, e - b + 1);
}

std::optional<double> to_double(std::string const & text)
{
	std::string const t = trim(text);
	if (t.empty())
		return std::nullopt;
	double v = 0.0;
	auto const [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
	if (ec != std::errc() || ptr != t.data() + t.size())
		return std::nullopt;
	return v;
}

double grid_number(std::string const & text, std::string const & field, std::string const & spec)
{
	auto const v = to_double(text);
	if (!v || !std::isfinite(*v))
		throw ConfigError(field, "cannot parse '" + text + "' in '" + spec + "'");
	return *v;
}

}  // namespace

std::string trace_to_csv(SpectrumTrace const & trace)
{
	std::string out = trace_csv_header;
	out += '\n';
	for (std::size_t i = 0; i < trace.probe_freqs.size(); ++i)
	{
		Complex const s = trace.s11[i];
		out += format_number(trace.probe_freqs[i]) + ',' + format_number(s.real()) + ',' + format_number(s.imag()) +
			',' + format_number(std::abs(s)) + ',' + format_number(std::arg(s)) + ',' +
			format_number(trace.n_flux[i]) + '\n';
	}
	return out;
}

void write_trace_csv(std::filesystem::path const & path, SpectrumTrace const & trace)
{
	write_atomic(path, trace_to_csv(trace));
}

TraceTable parse_trace_csv(std::string const & text, std::string const & source, TraceKind kind)
{
	std::istringstream in(text);
	std::string line;
	int lineno = 0;
	auto where = [&] { return source + ":" + std::to_string(lineno); };

	if (!std::getline(in, line))
		throw ConfigError(source + ":1", "empty file");
	++lineno;
	std::string const header = trim(line);
	TraceTable t;
	std::size_t columns = 0;
	if (header == trace_csv_header)
	{
		t.full_schema = true;
		columns = 6;
	}
	else if (header == "x,y,sigma" || header == "x,y")
		columns = split(header, ',').size();
	else
		throw ConfigError(where(), "unexpected header '" + header + "', expected '" + trace_csv_header +
				"' or 'x,y,sigma'");

	std::vector<double> sigmas;
	while (std::getline(in, line))
	{
		++lineno;
		if (trim(line).empty())
			continue;
		auto const cells = split(line, ',');
		if (cells.size() != columns)
			throw ConfigError(where(), "expected " + std::to_string(columns) + " columns, got " +
					std::to_string(cells.size()));
		std::vector<double> v;
		for (auto const & c : cells)
		{
			auto const d = to_double(c);
			if (!d || !std::isfinite(*d))
				throw ConfigError(where(), "not a finite number: '" + trim(c) + "'");
			v.push_back(*d);
		}
		if (t.full_schema)
		{
			t.nu_p.push_back(v[0]);
			t.s11.emplace_back(v[1], v[2]);
			t.n_flux.push_back(v[5]);
			t.measured.x.push_back(v[0]);
			t.measured.y.push_back(v[3]);
		}
		else
		{
			t.measured.x.push_back(v[0]);
			t.measured.y.push_back(v[1]);
			if (columns == 3)
				sigmas.push_back(v[2]);
		}
	}
	if (t.measured.x.empty())
		throw ConfigError(source, "no data rows");
	t.measured.kind = t.full_schema ? TraceKind::reflection_magnitude : kind;
	// A single per-trace sigma; rows disagreeing fall back to the RMS value.
	if (!sigmas.empty())
	{
		double s2 = 0.0;
		for (double s : sigmas)
			s2 += s * s;
		t.measured.sigma = std::sqrt(s2 / sigmas.size());
	}
	try
	{
		t.measured.validate();
	}
	catch (ConfigError const & e)
	{
		throw ConfigError(source, e.what());
	}
	return t;
}

TraceTable read_trace_csv(std::filesystem::path const & path, TraceKind kind)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw ConfigError(path.string(), "cannot open trace file");
	std::stringstream buf;
	buf << in.rdbuf();
	return parse_trace_csv(buf.str(), path.string(), kind);
}

std::vector<double> parse_grid(std::string const & spec)
{
	auto const parts = split(spec, ':');
	if (parts.size() != 3)
		throw ConfigError("grid", "expected 'start:stop:count', got '" + spec + "'");
	double const start = grid_number(parts[0], "grid", spec);
	double const stop = grid_number(parts[1], "grid", spec);
	double const count = grid_number(parts[2], "grid", spec);
	if (count < 1 || count != std::floor(count))
		throw ConfigError("grid", "count must be a positive integer in '" + spec + "'");
	if (count > 1 && !(stop > start))
		throw ConfigError("grid", "stop must exceed start in '" + spec + "'");
	return linspace(start, stop, static_cast<int>(count));
}

SweepSpec parse_sweep(std::string const & spec)
{
	auto const eq = spec.find('=');
	if (eq == std::string::npos || eq == 0)
		throw ConfigError("sweep", "expected 'param=start:stop:count', got '" + spec + "'");
	SweepSpec s;
	s.path = trim(spec.substr(0, eq));
	std::string const range = spec.substr(eq + 1);
	auto const parts = split(range, ':');
	if (parts.size() != 3)
		throw ConfigError("sweep", "expected 'param=start:stop:count', got '" + spec + "'");
	double const start = grid_number(parts[0], "sweep", spec);
	double const stop = grid_number(parts[1], "sweep", spec);
	double const count = grid_number(parts[2], "sweep", spec);
	if (count < 1 || count != std::floor(count))
		throw ConfigError("sweep", "count must be a positive integer in '" + spec + "'");
	s.values = linspace(start, stop, static_cast<int>(count));
	return s;
}

}  // namespace cqed
