#pragma once

#include "nb/report.hpp"

namespace nb {

// U(sl2) defining relations, Rouquier inverse and infinite Grassmannian.
Report run_usl2_suite(const VerifyOptions& opt);

// Omega functor: images of the eight nil-Brauer defining relations, plus the
// bubble generating-function identity.
Report run_omega_suite(const VerifyOptions& opt);

// zeta_a-expanded lemma catalog, driven by the data files in catalog/.
Report run_lemmas_suite(const VerifyOptions& opt);

// Regenerates the catalog data files (deterministic).
int write_catalog_files(const std::string& dir, int cutoff);

}  // namespace nb
