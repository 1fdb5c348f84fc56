#pragma once

namespace erwd {

/// Dimension d, excitement beta and reverse drift mu of the walk.
///
/// A walk standing on a site it has never visited steps to +e1 with
/// probability (1+beta)/(2d) and to -e1 with probability (1-beta)/(2d); on a
/// revisited site those become (1-mu)/(2d) and (1+mu)/(2d). All other
/// neighbours get 1/(2d).
class WalkParams {
public:
    /// Throws DomainError unless d >= 1 and beta, mu lie in [0, 1].
    WalkParams(int d, double beta, double mu);

    int d() const { return d_; }
    double beta() const { return beta_; }
    double mu() const { return mu_; }

private:
    int d_;
    double beta_;
    double mu_;
};

}  // namespace erwd
