#pragma once

#include "conic/calibration.hpp"

#include <optional>
#include <string>
#include <vector>

namespace conic {

/// Parsed quote sheet: a key,value preamble (valuation_date, recovery,
/// coupon) followed by a `tenor,uf_bid,uf_ask` table. The contract terms
/// from the preamble are stamped onto every quote.
struct QuoteFile {
    Date valuation;
    double recovery = 0.0;
    double coupon = 0.0;
    std::vector<MarketQuote> quotes;
};

/// Reads and validates a quote sheet. Rows come back sorted by maturity.
/// Inverted quotes (bid above ask) are only warned about here; the
/// two-price calibrator rejects them when it actually needs the order.
QuoteFile parse_quotes(const std::string& path);

/// Reads a discount curve given as `tenor_years,df` or `date,df` rows.
/// Date rows need the valuation date to become year fractions (ACT/365F).
/// Discount factors above one or increasing with maturity draw warnings;
/// rows out of time order are an error.
DiscountCurve parse_discount_curve(const std::string& path,
                                   const std::optional<Date>& valuation = std::nullopt);

struct ResultPillar {
    std::string tenor;
    double lambda = 0.0;
    double gamma = 0.0;
    double residual_bid = 0.0;
    double residual_ask = 0.0;

    bool operator==(const ResultPillar&) const = default;
};

struct SurvivalSample {
    Date date;
    double t = 0.0;
    double survival = 0.0;

    bool operator==(const SurvivalSample&) const = default;
};

/// Persisted calibration output. Carries everything needed to reproduce the
/// run byte-for-byte: solver controls, grid step, and content hashes of both
/// input files. No timestamps, so identical runs write identical files.
struct ResultFile {
    Date valuation;
    std::string distortion; // family name, or "none" for the mid bootstrap
    std::string curve_form;
    int grid_step_days = 1;
    double f_tol = 0.0;
    double x_tol = 0.0;
    std::string quotes_hash;
    std::string discount_hash;
    std::vector<ResultPillar> pillars;
    std::vector<SurvivalSample> survival;

    bool operator==(const ResultFile&) const = default;

    /// Hazard curve rebuilt from the stored pillars (tenors are resolved
    /// against the stored valuation date).
    HazardCurve hazard_curve() const;
};

/// FNV-1a (64-bit) of a file's bytes, as 16 hex digits.
std::string file_hash(const std::string& path);

/// JSON round-trips field-for-field; CSV is a write-only export with all
/// monetary values at 10 significant digits.
void write_result_json(const ResultFile& r, const std::string& path);
ResultFile read_result_json(const std::string& path);
void write_result_csv(const ResultFile& r, const std::string& path);

} // namespace conic
