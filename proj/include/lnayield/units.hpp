#pragma once

// Strong types for the quantities that appear in the receiver budget. Values in
// dB/dBm are unconstrained reals; linear values carry the domain checks.

namespace lnayield {

double db_to_linear(double db);
double linear_to_db(double linear);

class DecibelGain {
 public:
  explicit DecibelGain(double db);
  double value() const noexcept { return db_; }

 private:
  double db_;
};

/// Dimensionless power ratio, >= 0.
class LinearGain {
 public:
  explicit LinearGain(double ratio);
  double value() const noexcept { return ratio_; }

 private:
  double ratio_;
};

class NoiseFigureDb {
 public:
  explicit NoiseFigureDb(double db);
  double value() const noexcept { return db_; }

 private:
  double db_;
};

/// Linear noise factor, >= 1.
class NoiseFactor {
 public:
  explicit NoiseFactor(double factor);
  double value() const noexcept { return factor_; }

 private:
  double factor_;
};

class PowerDbm {
 public:
  explicit PowerDbm(double dbm);
  double value() const noexcept { return dbm_; }

 private:
  double dbm_;
};

/// Power in milliwatts, > 0.
class PowerMw {
 public:
  explicit PowerMw(double mw);
  double value() const noexcept { return mw_; }

 private:
  double mw_;
};

LinearGain to_linear(DecibelGain g);
DecibelGain to_db(LinearGain g);
NoiseFactor to_factor(NoiseFigureDb nf);
NoiseFigureDb to_db(NoiseFactor f);
PowerMw to_mw(PowerDbm p);
PowerDbm to_dbm(PowerMw p);

}  // namespace lnayield
