#pragma once

#include <functional>
#include <vector>

#include "kanto/errors.hpp"

namespace kanto {

enum class Measure { Counting, Lebesgue, Logarithmic };

/// One of the concrete group/measure settings: (Z^N,+) with counting
/// measure, (R,+) or (R^N,+) with Lebesgue measure, or (R^+,*) with the
/// logarithmic measure dt/t.
struct GroupSpace {
    enum class Variant { IntegerLattice, RealLine, RealSpace, PositiveRealsLog };

    Variant variant = Variant::RealLine;
    int dim = 1;

    static GroupSpace integer_lattice(int n = 1);
    static GroupSpace real_line();
    static GroupSpace real_space(int n);
    static GroupSpace positive_reals();

    Measure measure() const;
    // Neutral element coordinate: 0 for additive variants, 1 for (R^+,*).
    double neutral() const { return variant == Variant::PositiveRealsLog ? 1.0 : 0.0; }
    bool multiplicative() const { return variant == Variant::PositiveRealsLog; }
};

/// An interval [a,b], log-interval [a,b] with 0<a<b, or box prod [a_i,b_i].
struct Cell {
    GroupSpace space;
    std::vector<double> lo, hi;

    Cell(GroupSpace s, double a, double b);
    Cell(GroupSpace s, std::vector<double> a, std::vector<double> b);

    int dim() const { return static_cast<int>(lo.size()); }
};

// b-a (Lebesgue), ln(b/a) (logarithmic), product of lengths (box),
// lattice-point count (counting).
double haar_measure(const Cell& cell);

/// Sample sequence (t_k) with spacing bounds 0 < delta <= t_{k+1}-t_k <= Delta.
struct SampleSequence {
    std::function<double(long)> point;
    double delta = 1.0;
    double big_delta = 1.0;

    static SampleSequence uniform();                    // t_k = k
    static SampleSequence perturbed();                  // t_k = k + 0.3 sin k
    static SampleSequence uniform_scaled(double step);  // t_k = step*k
};

/// Symmetric compact set around the neutral element: [-gamma,gamma] on
/// additive variants (box on R^N), [1/gamma,gamma] on R^+.
struct SymmetricCompact {
    double gamma;
};

/// Produces the cell B_w(t) and the anchor h_w(t) for one of the concrete
/// operator settings.
struct CellFamily {
    enum class Rule {
        Sampling,          // H=Z, h_w(k)=t_k/w, B_w(k)=[t_k/w, t_{k+1}/w]
        SamplingSymmetric, // H=Z, h_w(k)=t_k,   B_w(k)=[t_k-1/w, t_k+1/w]
        ConvScaled,        // H=R, h_w(t)=t/w,   B_w(t)=[(t-1)/w,(t+1)/w]
        ConvUnit,          // H=R, h_w(t)=t,     B_w(t)=[t-1/w,t+1/w]
        Mellin,            // H=R+, h_w(t)=t,    B_w(t)=[t w/(w+1), t (w+1)/w]
        MultiDimSampling,  // H=Z^N, h_w(k)=t_k/w componentwise, box cells
    };

    Rule rule = Rule::ConvScaled;
    SampleSequence samples = SampleSequence::uniform();
    int dim = 1;
    // SamplingSymmetric only: nodes t_k/w instead of t_k, so the spacing
    // shrinks with w (the classical-sampling comparison setup).
    bool scale_by_w = false;

    static CellFamily sampling(SampleSequence seq = SampleSequence::uniform());
    static CellFamily sampling_symmetric(SampleSequence seq);
    static CellFamily sampling_symmetric_scaled(SampleSequence seq = SampleSequence::uniform());
    static CellFamily conv_scaled();
    static CellFamily conv_unit();
    static CellFamily mellin();
    static CellFamily multidim_sampling(int n, SampleSequence seq = SampleSequence::uniform());

    bool discrete() const;
    GroupSpace target_space() const;  // G
    GroupSpace index_space() const;   // H

    double anchor(double w, long k) const;
    double anchor(double w, double t) const;
    Cell cell(double w, long k) const;
    Cell cell(double w, double t) const;
    std::vector<double> anchor(double w, const std::vector<long>& k) const;
    Cell cell(double w, const std::vector<long>& k) const;
};

double cell_of_measure(const CellFamily& family, double w, double t);

/// mu_H-measure of {t in H : h_w(t) in K}. Closed forms: 2*gamma*w for
/// h_w(t)=t/w, 2*gamma for h_w(t)=t, 2 ln(gamma) on R+, lattice counts
/// for the discrete settings.
double upsilon(const CellFamily& family, double w, const SymmetricCompact& K);

// Max over the given anchors of the distance from h_w(t)-u (quotient on
// R+) to the neutral element over u in B_w(t). Used to audit condition
// that cells localize around their anchors as w grows.
double anchor_spread(const CellFamily& family, double w, const std::vector<double>& anchors);
double anchor_spread_discrete(const CellFamily& family, double w, const std::vector<long>& anchors);

} // namespace kanto
