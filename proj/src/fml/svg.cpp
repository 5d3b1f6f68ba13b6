#include <cmath>
#include <sstream>

#include "curvcap/fml/pipeline.hpp"

namespace curvcap {

std::string pipeline_svg(const PipelineResult& r) {
  const auto& om = r.whitney.omega;
  const double x0 = om.origin().real(), y0 = om.origin().imag();
  const double wd = om.rho() * om.nx(), ht = om.rho() * om.ny();
  const double scale = 800.0 / std::max(wd, ht);
  auto X = [&](double x) { return (x - x0) * scale; };
  auto Y = [&](double y) { return (y0 + ht - y) * scale; };
  std::ostringstream os;
  os.precision(8);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << wd * scale << "\" height=\"" << ht * scale
     << "\">\n";
  auto rect = [&](const Square& q, const char* style) {
    os << "<rect x=\"" << X(q.corner.real()) << "\" y=\"" << Y(q.corner.imag() + q.side) << "\" width=\""
       << q.side * scale << "\" height=\"" << q.side * scale << "\" style=\"" << style << "\"/>\n";
  };
  auto circle = [&](const Ball& b, const char* style) {
    os << "<circle cx=\"" << X(b.center.real()) << "\" cy=\"" << Y(b.center.imag()) << "\" r=\"" << b.radius * scale
       << "\" style=\"" << style << "\"/>\n";
  };
  os << "<g id=\"whitney\">\n";
  for (const auto& q : r.whitney.squares) rect(q.geom, "fill:none;stroke:#bbb;stroke-width:0.5");
  os << "</g>\n<g id=\"F\">\n";
  for (std::size_t k : r.F) rect(r.whitney.squares[k].geom, "fill:#cde;stroke:#36c;stroke-width:0.7");
  os << "</g>\n<g id=\"E\">\n";
  for (const auto& s : r.e.segments)
    os << "<line x1=\"" << X(s.a.real()) << "\" y1=\"" << Y(s.a.imag()) << "\" x2=\"" << X(s.b.real()) << "\" y2=\""
       << Y(s.b.imag()) << "\" style=\"stroke:#000;stroke-width:1.5\"/>\n";
  os << "</g>\n<g id=\"circles\">\n";
  for (const auto& c : r.munu.circles)
    if (c.radius > 0) circle({c.center, c.radius}, "fill:none;stroke:#c33;stroke-width:0.7");
  os << "</g>\n<g id=\"H\">\n";
  for (const auto& b : r.sets.H.balls) circle(b, "fill:none;stroke:#e80;stroke-width:1");
  os << "</g>\n<g id=\"H_D\">\n";
  for (const auto& q : r.sets.HD.geoms) rect(q, "fill:none;stroke:#829;stroke-width:1");
  os << "</g>\n<g id=\"S\">\n";
  for (const auto& b : r.sets.S.balls) circle(b, "fill:none;stroke:#2a2;stroke-width:0.7");
  os << "</g>\n<g id=\"T_D\">\n";
  for (const auto& q : r.sets.TD.geoms) rect(q, "fill:none;stroke:#850;stroke-width:1");
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace curvcap
