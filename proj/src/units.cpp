#include "lnayield/units.hpp"

#include <cmath>
#include <string>

#include "lnayield/error.hpp"

namespace lnayield {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError("budget", std::string("non-finite ") + what);
}

}  // namespace

double db_to_linear(double db) {
  require_finite(db, "dB value");
  return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear) {
  require_finite(linear, "linear value");
  if (linear <= 0.0) throw ValidationError("budget", "linear value must be > 0 to convert to dB");
  return 10.0 * std::log10(linear);
}

DecibelGain::DecibelGain(double db) : db_(db) { require_finite(db, "gain (dB)"); }

LinearGain::LinearGain(double ratio) : ratio_(ratio) {
  require_finite(ratio, "linear gain");
  if (ratio < 0.0) throw ValidationError("budget", "linear gain must be >= 0");
}

NoiseFigureDb::NoiseFigureDb(double db) : db_(db) { require_finite(db, "noise figure"); }

NoiseFactor::NoiseFactor(double factor) : factor_(factor) {
  require_finite(factor, "noise factor");
  if (factor < 1.0) throw ValidationError("budget", "noise factor must be >= 1");
}

PowerDbm::PowerDbm(double dbm) : dbm_(dbm) { require_finite(dbm, "power (dBm)"); }

PowerMw::PowerMw(double mw) : mw_(mw) {
  require_finite(mw, "power (mW)");
  if (mw <= 0.0) throw ValidationError("budget", "power in mW must be > 0");
}

LinearGain to_linear(DecibelGain g) { return LinearGain(db_to_linear(g.value())); }
DecibelGain to_db(LinearGain g) { return DecibelGain(linear_to_db(g.value())); }
NoiseFactor to_factor(NoiseFigureDb nf) { return NoiseFactor(db_to_linear(nf.value())); }
NoiseFigureDb to_db(NoiseFactor f) { return NoiseFigureDb(linear_to_db(f.value())); }
PowerMw to_mw(PowerDbm p) { return PowerMw(db_to_linear(p.value())); }
PowerDbm to_dbm(PowerMw p) { return PowerDbm(linear_to_db(p.value())); }

}  // namespace lnayield
