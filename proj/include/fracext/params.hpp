#pragma once

namespace fracext {

/// Problem triple (n, gamma, p) with the derived constants used throughout.
struct Params {
    int n = 2;
    double gamma = 0.5;
    double p = 4;
    double m = 0;        ///< weight exponent 1 - 2 gamma
    double q_star = 0;   ///< (n - 2 gamma + 2) p / n
    double kappa = 0;    ///< kernel normalization pi^{-n/2} Gamma((n+2gamma)/2) / Gamma(gamma)
    double d_gamma = 0;  ///< 2^{2gamma} Gamma(gamma) / Gamma(-gamma), negative

    /// Validates the triple and fills in the derived fields.
    static Params make(int n, double gamma, double p);
    /// Same with p set to the critical exponent 2n/(n - 2gamma); requires n > 2gamma.
    static Params critical(int n, double gamma);

    double nu() const { return 0.5 * (n + 2 * gamma); }
    double critical_p() const;
    bool is_critical(double tol = 1e-12) const;
    /// throws "subcritical dimension" unless n > 2 gamma
    void require_supercritical() const;
};

}  // namespace fracext
