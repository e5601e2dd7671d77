#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqed/fitting.hpp"

namespace cqed
{

struct PlotSeries
{
	std::vector<double> x, y;
	std::string label;
	bool markers = false;  ///< scatter points instead of a polyline
};

struct PlotAnnotation
{
	double x, y;
	std::string text;
};

struct PlotSpec
{
	std::string title;
	std::string x_label = "probe frequency (MHz)";
	std::string y_label;
	std::vector<PlotSeries> series;
	std::vector<PlotAnnotation> annotations;
	int width = 720;
	int height = 440;
};

/// Self-contained SVG; output depends only on the spec.
std::string render_svg(PlotSpec const & spec);

enum class PlotQuantity
{
	magnitude,  ///< |S11|
	phase       ///< arg S11, rad
};

/// Line plot of one trace; when `minima > 0` the fitted Lorentzian minima are marked.
PlotSpec trace_plot(MeasuredTrace const & trace, std::string const & label, int minima = 0);

/// 2J against Delta_r with the A / Delta_r overlay.
PlotSpec exchange_plot(std::span<std::pair<double, double> const> points, ScalingFit const & fit);

}  // namespace cqed
