#pragma once

// Generators for the standard fixtures and the two counterexample structures.
//
// Grid levels sample [0,1] at step 2^-m; the cell of k/2^m has an id with a
// zero-padded k so that id order equals numeric order.

#include <cellstruct/structure_file.hpp>

#include <string>
#include <vector>

namespace cellstruct {

struct GeneratorSpec {
  /// dyadic_interval, cantor, ex_fcont_G, ex_fcont_H, sine_curve_H,
  /// khalimsky_interval or full_image_map.
  std::string name;
  int levels = 4;
  int m = 2;
  /// Install the Khalimsky finite-model topology (ex_fcont_*, sine_curve_H).
  bool khalimsky = false;
};

/// Names accepted by generate().
const std::vector<std::string>& generator_names();

/// Throws Error on invalid parameters and for full_image_map (use
/// full_image_fixture).
InverseSequence generate(const GeneratorSpec& spec);

/// Grid cell id of k/2^m at resolution m.
std::string grid_id(const std::string& prefix, long k, int m);

struct FullImageFixture {
  InverseSequence source;  ///< dyadic_interval(levels), discrete
  InverseSequence target;  ///< 2^n cells per level, complete relations
  GCellMap map;            ///< g in G_i goes to H_1 u ... u H_i
};

FullImageFixture full_image_fixture(int levels);

/// Ex:Fcont bundle: G, H and the maps "jump", "straight" (weak, at depth
/// `depth`) and "identity" (quotient).
StructureFile ex_fcont_file(int m, int levels, int depth, bool khalimsky = true);

/// Sine-curve bundle: G = ex_fcont_G, H = sine_curve_H and the quotient map
/// "identity" sending the class of x to the class of the H thread ending at x.
StructureFile sine_curve_file(int m, int levels, int depth, bool khalimsky = true);

/// Full-image bundle with the g-cell map "full_image".
StructureFile full_image_file(int levels);

/// File for `gen`: plain generators give a map-free file; the bundle names
/// ex_fcont, sine_curve and full_image_map give the files above.
StructureFile generate_file(const GeneratorSpec& spec, int depth);

struct MapFixture {
  std::string name;
  StructureFile file;
  std::string map;  ///< key into file.maps
};

/// The jump map, the continuous choice f(x) = (x,0) and the full-image map.
std::vector<MapFixture> paper_counterexample_maps();

}  // namespace cellstruct
