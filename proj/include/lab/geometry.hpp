#pragma once

#include <array>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lab/common.hpp"

namespace lab::geom {

struct Disk {
    cplx center;
    double radius;
};

struct Rect {
    cplx corner;  // lower-left
    double width;
    double height;
};

struct Polygon {
    std::vector<cplx> vertices;  // simple, counterclockwise
};

class Window;

// Restriction of `base` to the half-plane {Re(z e^{-i theta}) <= l}.
// The boundary set is base boundary plus the cut chord.
struct Cut {
    std::shared_ptr<const Window> base;
    double theta;
    double l;
};

class Window {
  public:
    using Shape = std::variant<Disk, Rect, Polygon, Cut>;

    Window() : shape_(Disk{0.0, 1.0}) {}  // default needed for deserialization
    explicit Window(Shape s) : shape_(std::move(s)) {}

    const Shape& shape() const { return shape_; }

    static Window disk(cplx center, double radius);
    static Window rect(cplx corner, double width, double height);
    static Window polygon(std::vector<cplx> vertices);
    static Window cut(Window base, double theta, double l);

  private:
    Shape shape_;
};

// Degenerate cuts are flagged rather than rejected.
enum class CutState { proper, empty, full };
CutState cut_state(const Cut& c);

struct QuadratureGrid {
    std::vector<cplx> nodes;
    double weight = 0.0;  // uniform, h^2/pi (dA is Lebesgue/pi)
    double spacing = 0.0;
};

// A boundary set as straight segments (polyline sampling).
using Segment = std::array<cplx, 2>;
using BoundarySet = std::vector<Segment>;

double area(const Window& w);          // Lebesgue measure
double perimeter(const Window& w);     // H^1 of the boundary set
bool contains(const Window& w, cplx z);  // closed-window convention
double diameter(const Window& w);

// Axis-aligned bounding box, {min corner, max corner}.
std::array<cplx, 2> bounding_box(const Window& w);

Window translated(const Window& w, cplx shift);
Window scaled(const Window& w, double factor);  // about the origin

// Boundary polyline with segment length <= max_spacing. For Cut windows the
// set is base boundary plus the interior chord.
BoundarySet boundary_polyline(const Window& w, double max_spacing);

double boundary_length(const BoundarySet& e);

// Numerical lower Ahlfors 1-regularity constant of E at scale eta:
// inf over centers on E and radii r in a geometric grid of H^1(E cap B_r)/r.
// Centers are the polyline vertices; 5% tolerance documented.
double regularity_kappa(const BoundarySet& e, double eta);

// Numerical |E + B_r(0)| via fine-grid indicator counting.
double parallel_area(const BoundarySet& e, double r);

struct QuadratureOptions {
    std::size_t node_cap = 6000;
};

QuadratureGrid quadrature(const Window& w, double h, const QuadratureOptions& opt = {});

void to_json(nlohmann::json& j, const Window& w);
void from_json(const nlohmann::json& j, Window& w);

}  // namespace lab::geom
