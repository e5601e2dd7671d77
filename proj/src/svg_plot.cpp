#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iterator>
#include <limits>

#include "cqed/svg_plot.hpp"

namespace cqed
{
namespace
{

std::string num(double v)
{
	char buf[48];
	std::snprintf(buf, sizeof buf, "%.6g", v);
	return buf;
}

std::string px(double v)
{
	char buf[48];
	std::snprintf(buf, sizeof buf, "%.2f", v);
	return buf;
}

std::string escape(std::string const & s)
{
	std::string out;
	for (char c : s)
	{
		switch (c)
		{
		case '&': out += "&amp;"; break;
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '"': out += "&quot;"; break;
		default: out += c;
		}
	}
	return out;
}

double nice_step(double span, int target)
{
	double const raw = span / target;
	double const mag = std::pow(10.0, std::floor(std::log10(raw)));
	double const f = raw / mag;
	double const nice = f < 1.5 ? 1 : f < 3 ? 2 : f < 7 ? 5 : 10;
	return nice * mag;
}

struct Range
{
	double lo = std::numeric_limits<double>::infinity();
	double hi = -std::numeric_limits<double>::infinity();

	void add(double v)
	{
		if (std::isfinite(v))
		{
			lo = std::min(lo, v);
			hi = std::max(hi, v);
		}
	}
	void finish(bool pad)
	{
		if (!std::isfinite(lo))
			lo = 0, hi = 1;
		if (hi - lo <= 0)
		{
			double const d = lo == 0 ? 1.0 : 0.05 * std::abs(lo);
			lo -= d, hi += d;
		}
		else if (pad)
		{
			double const d = 0.05 * (hi - lo);
			lo -= d, hi += d;
		}
	}
};

char const * const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

std::string render_svg(PlotSpec const & spec)
{
	double const W = spec.width, H = spec.height;
	double const left = 78, right = 20, top = spec.title.empty() ? 20 : 40, bottom = 56;
	double const pw = W - left - right, ph = H - top - bottom;

	Range xr, yr;
	for (auto const & s : spec.series)
	{
		for (double v : s.x)
			xr.add(v);
		for (double v : s.y)
			yr.add(v);
	}
	xr.finish(false);
	yr.finish(true);

	auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
	auto sy = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

	std::string o;
	o += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
	o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
		"\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
	o += "<rect x=\"0\" y=\"0\" width=\"" + num(W) + "\" height=\"" + num(H) + "\" fill=\"white\"/>\n";
	if (!spec.title.empty())
		o += "<text x=\"" + px(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" +
			escape(spec.title) + "</text>\n";

	// ticks and grid
	o += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
	std::string labels;
	double const xs = nice_step(xr.hi - xr.lo, 6);
	for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs)
	{
		double const X = sx(t);
		o += "<line x1=\"" + px(X) + "\" y1=\"" + px(top) + "\" x2=\"" + px(X) + "\" y2=\"" + px(top + ph) + "\"/>\n";
		labels += "<text x=\"" + px(X) + "\" y=\"" + px(top + ph + 16) + "\" text-anchor=\"middle\">" +
			num(std::abs(t) < 1e-12 * xs ? 0.0 : t) + "</text>\n";
	}
	double const ys = nice_step(yr.hi - yr.lo, 5);
	for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys)
	{
		double const Y = sy(t);
		o += "<line x1=\"" + px(left) + "\" y1=\"" + px(Y) + "\" x2=\"" + px(left + pw) + "\" y2=\"" + px(Y) + "\"/>\n";
		labels += "<text x=\"" + px(left - 6) + "\" y=\"" + px(Y + 4) + "\" text-anchor=\"end\">" +
			num(std::abs(t) < 1e-12 * ys ? 0.0 : t) + "</text>\n";
	}
	o += "</g>\n";
	o += labels;
	o += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) +
		"\" fill=\"none\" stroke=\"black\"/>\n";
	o += "<text x=\"" + px(left + pw / 2) + "\" y=\"" + px(H - 14) + "\" text-anchor=\"middle\">" +
		escape(spec.x_label) + "</text>\n";
	o += "<text transform=\"translate(18," + px(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
		escape(spec.y_label) + "</text>\n";

	for (std::size_t k = 0; k < spec.series.size(); ++k)
	{
		auto const & s = spec.series[k];
		std::string const colour = palette[k % std::size(palette)];
		std::size_t const n = std::min(s.x.size(), s.y.size());
		if (s.markers)
		{
			o += "<g fill=\"" + colour + "\">\n";
			for (std::size_t i = 0; i < n; ++i)
				o += "<circle cx=\"" + px(sx(s.x[i])) + "\" cy=\"" + px(sy(s.y[i])) + "\" r=\"3\"/>\n";
			o += "</g>\n";
		}
		else
		{
			o += "<polyline fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\" points=\"";
			for (std::size_t i = 0; i < n; ++i)
				o += (i ? " " : "") + px(sx(s.x[i])) + "," + px(sy(s.y[i]));
			o += "\"/>\n";
		}
		if (!s.label.empty())
		{
			double const ly = top + 16 + 16 * static_cast<double>(k);
			o += "<line x1=\"" + px(left + pw - 150) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(left + pw - 130) +
				"\" y2=\"" + px(ly - 4) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
			o += "<text x=\"" + px(left + pw - 124) + "\" y=\"" + px(ly) + "\">" + escape(s.label) + "</text>\n";
		}
	}

	for (auto const & a : spec.annotations)
	{
		double const X = sx(a.x), Y = sy(a.y);
		o += "<path d=\"M" + px(X) + "," + px(Y + 4) + " l-5,10 h10 z\" fill=\"black\"/>\n";
		o += "<text x=\"" + px(X) + "\" y=\"" + px(Y + 28) + "\" text-anchor=\"middle\" font-size=\"11\">" +
			escape(a.text) + "</text>\n";
	}
	o += "</svg>\n";
	return o;
}

PlotSpec trace_plot(MeasuredTrace const & trace, std::string const & label, int minima)
{
	PlotSpec spec;
	spec.title = label;
	spec.y_label = trace.kind == TraceKind::phase_shift ? "phase (rad)" : "|S11|";
	spec.series.push_back({trace.x, trace.y, {}, false});
	if (minima > 0)
	{
		LorentzianFit const fit = lorentzian_peaks(trace, minima, Polarity::dips);
		for (auto const & p : fit.peaks)
			spec.annotations.push_back({p.center, fit.baseline + p.amplitude, num(p.center) + " MHz"});
	}
	return spec;
}

PlotSpec exchange_plot(std::span<std::pair<double, double> const> points, ScalingFit const & fit)
{
	PlotSpec spec;
	spec.title = "exchange splitting";
	spec.x_label = "resonator detuning (MHz)";
	spec.y_label = "2J (MHz)";
	PlotSeries pts{{}, {}, "exact", true};
	double lo = std::numeric_limits<double>::infinity(), hi = -lo;
	for (auto const & [x, y] : points)
	{
		pts.x.push_back(x);
		pts.y.push_back(y);
		lo = std::min(lo, x);
		hi = std::max(hi, x);
	}
	PlotSeries curve{{}, {}, "A / detuning, A = " + num(fit.amplitude) + " MHz^2", false};
	if (!points.empty())
		for (double x : linspace(lo, hi, 200))
		{
			curve.x.push_back(x);
			curve.y.push_back(fit.amplitude / x);
		}
	spec.series.push_back(std::move(pts));
	spec.series.push_back(std::move(curve));
	return spec;
}

}  // namespace cqed
