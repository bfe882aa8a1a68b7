#pragma once

// The named algebras of the classification lists, shipped as a text manifest
// (data/catalog.alg) and embedded at build time, together with witness
// recipes and a harness that checks every claim attached to an entry.
//
// Claims understood by the harness, with <w> a witness label (w, g, g'):
//   lck(<w>) lcb(<w>) skt(<w>) kahler(<w>) balanced(<w>) vaisman(<w>)
//   non-kahler(<w>) non-balanced(<w>) non-lck(<w>) v-zero(<w>)
//   lck-decomposition(<w>) lee(<w>) = <one-form>
//   nilpotent unimodular non-unimodular unimodular-iff <param> = <expr>
//   lchk hyperkahler non-hyperkahler flat
//   admits-no-kahler admits-no-balanced admits-no-lck   (reported NOT-CHECKED)

#include <optional>
#include <string>
#include <vector>

#include "aalg/almost_abelian.hpp"
#include "aalg/document.hpp"
#include "aalg/lchk.hpp"

namespace aalg {

/// The manifest text exactly as shipped.
const std::string& catalog_text();

/// Parsed once on first use.
const Manifest& catalog_manifest();

/// Throws Input when no entry carries that name.
const AlgebraDocument& find_entry(const std::string& name);

/// Throws CONSTRAINT_VIOLATION or UNBOUND_PARAMETER.
LieAlgebra<Rational> instantiate(const AlgebraDocument& entry, const Bindings& params = {});

struct Witness {
  std::string label;
  HermitianStructure<Rational> structure;
  /// Adapted data behind the structure, when it has an exact form.
  std::optional<HermitianData<Rational>> data;
};

struct WitnessSet {
  std::vector<Witness> structures;
  std::optional<HypercomplexTriple<Rational>> triple;
};

/// Builds every witness structure of the entry on the instantiated algebra
/// itself (in the entry's own basis). Throws WITNESS_FAILURE when a recipe
/// does not reproduce the entry.
WitnessSet witness(const AlgebraDocument& entry, const Bindings& params = {});

/// A basis change p with l.change_basis(p) == target, for two almost abelian
/// algebras whose codimension-one abelian ideals and transversal elements are
/// given. Throws WITNESS_FAILURE when no invertible intertwiner exists.
Matrix<Rational> almost_abelian_isomorphism(const LieAlgebra<Rational>& l, const std::vector<int>& l_ideal, int l_top,
                                            const LieAlgebra<Rational>& target, const std::vector<int>& target_ideal,
                                            int target_top);

/// Parameter values tried by default.
const std::vector<Rational>& default_sample_values();

struct ParameterSample {
  Bindings params;
  bool on_locus = false;
};

/// Up to n tuples satisfying the constraints, plus up to n on the unimodular
/// locus when the entry claims one. Entries without free parameters get a
/// single sample.
std::vector<ParameterSample> parameter_samples(const AlgebraDocument& entry, int n);

enum class CheckStatus { Pass, Fail, NotChecked };

std::string status_name(CheckStatus s);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Fail;
  std::string detail;
};

struct SampleReport {
  Bindings params;
  bool on_locus = false;
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct EntryReport {
  std::string name;
  std::vector<SampleReport> samples;
  /// Failures that are not tied to one sample (for example too few samples).
  std::vector<std::string> errors;
  bool passed() const;
};

struct CatalogReport {
  std::vector<EntryReport> entries;
  bool passed() const;
};

EntryReport verify_entry(const AlgebraDocument& entry, int samples = 3);

/// Entries are processed independently (on up to `threads` threads) and
/// reported in manifest order.
CatalogReport verify_all(int samples = 3, const std::optional<std::string>& entry = std::nullopt, unsigned threads = 1);

}  // namespace aalg
