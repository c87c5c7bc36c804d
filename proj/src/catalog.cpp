#include "nb/catalog.hpp"

namespace nb {

// Implemented alongside the U(sl2) engine; stubs keep the CLI linking until
// that component lands.
Report run_usl2_suite(const VerifyOptions&) { Report r; r.suite = "usl2"; return r; }
Report run_omega_suite(const VerifyOptions&) { Report r; r.suite = "omega"; return r; }
Report run_lemmas_suite(const VerifyOptions&) { Report r; r.suite = "lemmas"; return r; }
int write_catalog_files(const std::string&, int) { return 0; }

}  // namespace nb
