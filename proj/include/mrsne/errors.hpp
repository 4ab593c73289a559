#ifndef MRSNE_ERRORS_HPP
#define MRSNE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mrsne {

using Index = std::ptrdiff_t;

// Base class for every failure this library reports.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NegativeWeight : public Error {
public:
    NegativeWeight(Index i, Index j)
        : Error("negative cross-graph weight at (" + std::to_string(i) + ", " +
                std::to_string(j) + ")"),
          row(i), col(j) {}
    Index row, col;
};

class EmptyDomain : public Error {
public:
    explicit EmptyDomain(int domain, const std::string& what)
        : Error("domain " + std::to_string(domain) + ": " + what), domain(domain) {}
    int domain;
};

class NonFiniteValue : public Error {
public:
    NonFiniteValue(const std::string& where, Index i, Index j)
        : Error("non-finite value in " + where + " at (" + std::to_string(i) +
                ", " + std::to_string(j) + ")"),
          row(i), col(j) {}
    Index row, col;
};

class AllZeroCrossGraph : public Error {
public:
    AllZeroCrossGraph() : Error("cross-domain graph has no positive weight") {}
};

class DegenerateRow : public Error {
public:
    explicit DegenerateRow(Index i)
        : Error("no finite off-diagonal distance for point " + std::to_string(i)),
          point(i) {}
    Index point;
};

class PerplexityUnreachable : public Error {
public:
    PerplexityUnreachable(Index i, double perplexity, double entropy_perplexity)
        : Error("perplexity " + std::to_string(perplexity) +
                " unreachable for point " + std::to_string(i) +
                ": all off-diagonal distances are equal (2^H = " +
                std::to_string(entropy_perplexity) + " for every bandwidth)"),
          point(i) {}
    Index point;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class MissingGraphWithPositiveBeta : public Error {
public:
    explicit MissingGraphWithPositiveBeta(const std::string& block)
        : Error("block " + block + " is absent but its weight is positive") {}
};

class ZeroQWithPositiveP : public Error {
public:
    ZeroQWithPositiveP(Index i, Index j)
        : Error("q is zero while p is positive at (" + std::to_string(i) + ", " +
                std::to_string(j) + ")"),
          row(i), col(j) {}
    Index row, col;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class DivergedObjective : public Error {
public:
    explicit DivergedObjective(Index iteration)
        : Error("objective became non-finite at iteration " +
                std::to_string(iteration)),
          iteration(iteration) {}
    Index iteration;
};

class KTooLarge : public Error {
public:
    KTooLarge(Index k, Index available)
        : Error("k = " + std::to_string(k) + " exceeds the " +
                std::to_string(available) + " available candidates"),
          k(k), available(available) {}
    Index k, available;
};

class NoPositives : public Error {
public:
    NoPositives() : Error("no query has any positive; ROC is undefined") {}
};

class DegenerateDomain : public Error {
public:
    explicit DegenerateDomain(int domain)
        : Error("domain " + std::to_string(domain) +
                " coordinates are all identical (zero covariance trace)"),
          domain(domain) {}
    int domain;
};

class RankDeficient : public Error {
public:
    explicit RankDeficient(const std::string& which)
        : Error("covariance of " + which +
                " is numerically singular; use a positive regularization") {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& path, Index line, const std::string& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line(line) {}
    Index line;
};

class IndexOutOfRange : public Error {
public:
    IndexOutOfRange(Index i, Index j)
        : Error("edge index (" + std::to_string(i) + ", " + std::to_string(j) +
                ") is out of range"),
          row(i), col(j) {}
    Index row, col;
};

class DuplicateEntry : public Error {
public:
    DuplicateEntry(Index i, Index j)
        : Error("duplicate edge (" + std::to_string(i) + ", " + std::to_string(j) + ")"),
          row(i), col(j) {}
    Index row, col;
};

class NonPositiveWeight : public Error {
public:
    NonPositiveWeight(Index i, Index j)
        : Error("edge (" + std::to_string(i) + ", " + std::to_string(j) +
                ") must have a positive weight"),
          row(i), col(j) {}
    Index row, col;
};

class UnsupportedDimension : public Error {
public:
    explicit UnsupportedDimension(Index k)
        : Error("scatter plots need 2-dimensional coordinates, got K = " +
                std::to_string(k)),
          k(k) {}
    Index k;
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

} // namespace mrsne

#endif // MRSNE_ERRORS_HPP
