#pragma once

#include "tropex/linalg.hpp"
#include "tropex/linear_system.hpp"
#include "tropex/rational.hpp"

#include <optional>
#include <vector>

namespace tropex {

// Affine condition with integral slope: slope . x + constant REL 0, where
// REL is >= or > (equalities are stored as opposite pairs of weak rows).
struct AffCondition {
  VecI slope;
  Rat constant = 0;
  bool strict = false;
};

// Integral affine map x -> a x + b between lattice-coordinate spaces.
struct IntAffineMap {
  IntMat a;      // rows = target dim, cols = source dim
  VecQ b;        // length = target dim

  int source_dim() const { return a.cols; }
  int target_dim() const { return a.rows; }
};

IntAffineMap identity_map(int n);
IntAffineMap compose(const IntAffineMap& outer, const IntAffineMap& inner);
VecQ map_point(const IntAffineMap& f, const VecQ& x);

// A nonempty finite intersection of weak and strict integral-slope affine
// conditions. Emptiness is ruled out at construction; operations that can
// produce the empty set return an optional.
class Polytope {
 public:
  // Throws invalid_input_error when the conditions have no common solution.
  Polytope(int ambient_dim, std::vector<AffCondition> conditions);

  static std::optional<Polytope> try_make(int ambient_dim,
                                          std::vector<AffCondition> conditions);

  // Cheap path: the witness is verified against the conditions (throws when
  // it fails), which already proves nonemptiness without an LP.
  static Polytope with_witness(int ambient_dim,
                               std::vector<AffCondition> conditions, VecQ w);

  static Polytope full_space(int ambient_dim);

  int ambient_dim() const { return ambient_; }
  const std::vector<AffCondition>& conditions() const { return conds_; }

  // A rational point satisfying every condition.
  VecQ witness() const;

  bool contains(const VecQ& x) const;

  LinearSystem as_system() const;

  // Condition-wise weakening of every strict row; equals the topological
  // closure of the solution set.
  Polytope closure() const;

  // Dimension of the affine span.
  int dim() const;

  // Conditions of the closure that hold with equality on the whole set.
  std::vector<VecI> span_equations_slopes() const;

  // The relative interior: implied equalities pinned, all other closure
  // conditions made strict.
  Polytope relative_interior() const;

  // A rational point of the relative interior.
  VecQ relint_witness() const;

  // Saturated lattice basis of the direction space of the affine span.
  std::vector<VecI> direction_basis() const;

  bool contains_line() const;

  // Directions d with slope . d REL 0 for every condition (strictness kept
  // on rows that were strict). Can be empty for half-open bounded sets,
  // hence the optional; never empty when the set is closed.
  std::optional<Polytope> recession_cone() const;

  // is_cone_at: the set is invariant under positive scaling about `apex`
  // (decided exactly via the doubling map). is_cone: such an apex exists in
  // the integral lattice.
  bool is_cone() const;
  bool is_cone_at(const VecQ& apex) const;

 private:
  Polytope() = default;

  int ambient_ = 0;
  std::vector<AffCondition> conds_;
  VecQ witness_;
};

// Set equality / inclusion of solution sets (exact).
bool same_set(const Polytope& p, const Polytope& q);
bool subset_of(const Polytope& p, const Polytope& q);

// Does p's solution set contain x in its relative interior?
bool relint_contains(const Polytope& p, const VecQ& x);

// Faces of the closure: zero sets of subsets of conditions, one per distinct
// maximal active set, ordered by decreasing dimension. Each face is closed.
struct Face {
  Polytope poly;
  std::vector<int> active;  // indices into closure().conditions(), maximal
  int dim = 0;              // dimension of the face
};
std::vector<Face> faces_of_closure(const Polytope& p);

// The face of cl(p) whose relative interior contains x (unique), as an index
// into faces_of_closure(p); -1 when x lies outside the closure.
int face_through(const Polytope& p, const std::vector<Face>& faces,
                 const VecQ& x);

// Intersection (empty -> nullopt).
std::optional<Polytope> intersect(const Polytope& p, const Polytope& q);

// Product in block coordinates.
Polytope product(const Polytope& p, const Polytope& q);

// { (x, y) : x in p, y in q, f(x) = g(y) } inside the product coordinates.
std::optional<Polytope> fiber_product(const Polytope& p, const IntAffineMap& f,
                                      const Polytope& q, const IntAffineMap& g);

// Preimage f^-1(p) of p under f, restricted to nothing else (may be empty).
std::optional<Polytope> preimage(const IntAffineMap& f, const Polytope& p);

// Exact image f(p); uses direct transport when f is invertible and
// projection otherwise.
Polytope affine_image(const IntAffineMap& f, const Polytope& p);

// Primitive generators whose hull is the closure of the given cone, computed
// by double description on the closure slopes: one member per extreme ray of
// the pointed quotient plus a spanning set of the lineality space in both
// signs. Input must be a cone about the origin.
std::vector<VecI> generators_of_cone(const Polytope& cone);

// Translate of the solution set by t (i.e. { x + t : x in p }).
Polytope translate(const Polytope& p, const VecQ& t);

// Smallest closed cone containing the given rays (the zero cone when empty).
Polytope cone_from_generators(const std::vector<VecI>& rays, int ambient_dim);

}  // namespace tropex
