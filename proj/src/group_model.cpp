#include "kanto/group_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kanto {

GroupSpace GroupSpace::integer_lattice(int n) {
    if (n < 1) throw InvalidInput("integer_lattice: dim must be >= 1");
    return {Variant::IntegerLattice, n};
}

GroupSpace GroupSpace::real_line() { return {Variant::RealLine, 1}; }

GroupSpace GroupSpace::real_space(int n) {
    if (n < 2) throw InvalidInput("real_space: dim must be >= 2");
    return {Variant::RealSpace, n};
}

GroupSpace GroupSpace::positive_reals() { return {Variant::PositiveRealsLog, 1}; }

Measure GroupSpace::measure() const {
    switch (variant) {
        case Variant::IntegerLattice: return Measure::Counting;
        case Variant::PositiveRealsLog: return Measure::Logarithmic;
        default: return Measure::Lebesgue;
    }
}

Cell::Cell(GroupSpace s, double a, double b) : space(s), lo{a}, hi{b} {
    if (!(a < b)) throw InvalidInput("Cell: requires a < b");
    if (s.variant == GroupSpace::Variant::PositiveRealsLog && !(a > 0.0))
        throw InvalidInput("Cell: R+ cell requires a > 0");
}

Cell::Cell(GroupSpace s, std::vector<double> a, std::vector<double> b)
    : space(s), lo(std::move(a)), hi(std::move(b)) {
    if (lo.empty() || lo.size() != hi.size())
        throw InvalidInput("Cell: endpoint vectors must be nonempty and of equal size");
    for (size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] < hi[i])) throw InvalidInput("Cell: requires a < b componentwise");
        if (s.variant == GroupSpace::Variant::PositiveRealsLog && !(lo[i] > 0.0))
            throw InvalidInput("Cell: R+ cell requires a > 0");
    }
}

double haar_measure(const Cell& cell) {
    double m = 1.0;
    for (int i = 0; i < cell.dim(); ++i) {
        const double a = cell.lo[i], b = cell.hi[i];
        switch (cell.space.measure()) {
            case Measure::Lebesgue: m *= b - a; break;
            case Measure::Logarithmic: m *= std::log(b / a); break;
            case Measure::Counting: {
                const double n = std::floor(b) - std::ceil(a) + 1.0;
                m *= std::max(n, 0.0);
                break;
            }
        }
    }
    return m;
}

SampleSequence SampleSequence::uniform() {
    return {[](long k) { return static_cast<double>(k); }, 1.0, 1.0};
}

SampleSequence SampleSequence::perturbed() {
    // t_k = k + 0.3 sin k; spacing stays within [0.4, 1.6].
    return {[](long k) { return static_cast<double>(k) + 0.3 * std::sin(static_cast<double>(k)); },
            0.4, 1.6};
}

SampleSequence SampleSequence::uniform_scaled(double step) {
    if (!(step > 0.0)) throw InvalidInput("uniform_scaled: step must be positive");
    return {[step](long k) { return step * static_cast<double>(k); }, step, step};
}

CellFamily CellFamily::sampling(SampleSequence seq) {
    CellFamily f;
    f.rule = Rule::Sampling;
    f.samples = std::move(seq);
    return f;
}

CellFamily CellFamily::sampling_symmetric(SampleSequence seq) {
    CellFamily f;
    f.rule = Rule::SamplingSymmetric;
    f.samples = std::move(seq);
    return f;
}

CellFamily CellFamily::sampling_symmetric_scaled(SampleSequence seq) {
    CellFamily f;
    f.rule = Rule::SamplingSymmetric;
    f.samples = std::move(seq);
    f.scale_by_w = true;
    return f;
}

CellFamily CellFamily::conv_scaled() {
    CellFamily f;
    f.rule = Rule::ConvScaled;
    return f;
}

CellFamily CellFamily::conv_unit() {
    CellFamily f;
    f.rule = Rule::ConvUnit;
    return f;
}

CellFamily CellFamily::mellin() {
    CellFamily f;
    f.rule = Rule::Mellin;
    return f;
}

CellFamily CellFamily::multidim_sampling(int n, SampleSequence seq) {
    if (n < 2) throw InvalidInput("multidim_sampling: dim must be >= 2");
    CellFamily f;
    f.rule = Rule::MultiDimSampling;
    f.samples = std::move(seq);
    f.dim = n;
    return f;
}

bool CellFamily::discrete() const {
    return rule == Rule::Sampling || rule == Rule::SamplingSymmetric ||
           rule == Rule::MultiDimSampling;
}

GroupSpace CellFamily::target_space() const {
    switch (rule) {
        case Rule::Mellin: return GroupSpace::positive_reals();
        case Rule::MultiDimSampling: return GroupSpace::real_space(dim);
        default: return GroupSpace::real_line();
    }
}

GroupSpace CellFamily::index_space() const {
    switch (rule) {
        case Rule::Sampling:
        case Rule::SamplingSymmetric: return GroupSpace::integer_lattice(1);
        case Rule::MultiDimSampling: return GroupSpace::integer_lattice(dim);
        case Rule::Mellin: return GroupSpace::positive_reals();
        default: return GroupSpace::real_line();
    }
}

static void require_w(double w) {
    if (!(w > 0.0)) throw InvalidInput("CellFamily: w must be positive");
}

double CellFamily::anchor(double w, long k) const {
    require_w(w);
    switch (rule) {
        case Rule::Sampling: return samples.point(k) / w;
        case Rule::SamplingSymmetric:
            return scale_by_w ? samples.point(k) / w : samples.point(k);
        default: throw InvalidInput("CellFamily::anchor(long): rule is not discrete");
    }
}

double CellFamily::anchor(double w, double t) const {
    require_w(w);
    switch (rule) {
        case Rule::ConvScaled: return t / w;
        case Rule::ConvUnit: return t;
        case Rule::Mellin:
            if (!(t > 0.0)) throw InvalidInput("CellFamily::anchor: Mellin anchor must be positive");
            return t;
        default: throw InvalidInput("CellFamily::anchor(double): rule is discrete");
    }
}

Cell CellFamily::cell(double w, long k) const {
    require_w(w);
    switch (rule) {
        case Rule::Sampling:
            return Cell(target_space(), samples.point(k) / w, samples.point(k + 1) / w);
        case Rule::SamplingSymmetric: {
            const double t = anchor(w, k);
            return Cell(target_space(), t - 1.0 / w, t + 1.0 / w);
        }
        default: throw InvalidInput("CellFamily::cell(long): rule is not discrete");
    }
}

Cell CellFamily::cell(double w, double t) const {
    require_w(w);
    switch (rule) {
        case Rule::ConvScaled: return Cell(target_space(), (t - 1.0) / w, (t + 1.0) / w);
        case Rule::ConvUnit: return Cell(target_space(), t - 1.0 / w, t + 1.0 / w);
        case Rule::Mellin:
            if (!(t > 0.0)) throw InvalidInput("CellFamily::cell: Mellin anchor must be positive");
            return Cell(target_space(), t * w / (w + 1.0), t * (w + 1.0) / w);
        default: throw InvalidInput("CellFamily::cell(double): rule is discrete");
    }
}

std::vector<double> CellFamily::anchor(double w, const std::vector<long>& k) const {
    require_w(w);
    if (rule != Rule::MultiDimSampling)
        throw InvalidInput("CellFamily::anchor(vector): rule is not multidimensional");
    std::vector<double> h(k.size());
    for (size_t i = 0; i < k.size(); ++i) h[i] = samples.point(k[i]) / w;
    return h;
}

Cell CellFamily::cell(double w, const std::vector<long>& k) const {
    require_w(w);
    if (rule != Rule::MultiDimSampling)
        throw InvalidInput("CellFamily::cell(vector): rule is not multidimensional");
    if (static_cast<int>(k.size()) != dim)
        throw InvalidInput("CellFamily::cell(vector): index dimension mismatch");
    std::vector<double> lo(k.size()), hi(k.size());
    for (size_t i = 0; i < k.size(); ++i) {
        lo[i] = samples.point(k[i]) / w;
        hi[i] = samples.point(k[i] + 1) / w;
    }
    return Cell(target_space(), std::move(lo), std::move(hi));
}

double cell_of_measure(const CellFamily& family, double w, double t) {
    return haar_measure(family.cell(w, t));
}

double upsilon(const CellFamily& family, double w, const SymmetricCompact& K) {
    require_w(w);
    if (!(K.gamma > 0.0)) throw InvalidInput("upsilon: gamma must be positive");
    const double g = K.gamma;
    switch (family.rule) {
        case CellFamily::Rule::ConvScaled: return 2.0 * g * w;
        case CellFamily::Rule::ConvUnit: return 2.0 * g;
        case CellFamily::Rule::Mellin:
            if (!(g > 1.0)) throw InvalidInput("upsilon: Mellin compact set requires gamma > 1");
            return 2.0 * std::log(g);
        case CellFamily::Rule::Sampling:
        case CellFamily::Rule::SamplingSymmetric: {
            // Count lattice points with anchor inside [-gamma, gamma].
            long count = 0;
            const long span = static_cast<long>(std::ceil(g * w / family.samples.delta)) + 2;
            for (long k = -span; k <= span; ++k)
                if (std::abs(family.anchor(w, k)) <= g) ++count;
            return static_cast<double>(count);
        }
        case CellFamily::Rule::MultiDimSampling: {
            long count = 0;
            const long span = static_cast<long>(std::ceil(g * w / family.samples.delta)) + 2;
            for (long k = -span; k <= span; ++k)
                if (std::abs(family.samples.point(k) / w) <= g) ++count;
            double m = 1.0;
            for (int i = 0; i < family.dim; ++i) m *= static_cast<double>(count);
            return m;
        }
    }
    throw InvalidInput("upsilon: unsupported rule");
}

static double spread_of_cell(const CellFamily& family, const Cell& c, double h) {
    if (family.rule == CellFamily::Rule::Mellin)
        return std::max(std::abs(std::log(h / c.lo[0])), std::abs(std::log(h / c.hi[0])));
    double d = 0.0;
    for (int i = 0; i < c.dim(); ++i)
        d = std::max(d, std::max(std::abs(h - c.lo[i]), std::abs(h - c.hi[i])));
    return d;
}

double anchor_spread(const CellFamily& family, double w, const std::vector<double>& anchors) {
    double worst = 0.0;
    for (double t : anchors)
        worst = std::max(worst, spread_of_cell(family, family.cell(w, t), family.anchor(w, t)));
    return worst;
}

double anchor_spread_discrete(const CellFamily& family, double w, const std::vector<long>& anchors) {
    double worst = 0.0;
    for (long k : anchors)
        worst = std::max(worst, spread_of_cell(family, family.cell(w, k), family.anchor(w, k)));
    return worst;
}

} // namespace kanto
