#include "conic/market_io.hpp"

#include "conic/errors.hpp"
#include "conic/log.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace conic {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    std::size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, ',')) fields.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& field, const std::string& path, int line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ParseError(path + ":" + std::to_string(line_no) + ": not a number: '" + field +
                         "'");
    }
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return in;
}

constexpr const char* kQuoteHeader = "tenor,uf_bid,uf_ask";

} // namespace

QuoteFile parse_quotes(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    QuoteFile qf;
    bool have_valuation = false, have_recovery = false, have_coupon = false;
    bool in_rows = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line);
        if (!in_rows) {
            if (f.size() == 3 && f[0] == "tenor" && f[1] == "uf_bid" && f[2] == "uf_ask") {
                in_rows = true;
                continue;
            }
            if (f.size() != 2)
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected 'key,value' preamble or the '" + kQuoteHeader +
                                 "' header");
            if (f[0] == "valuation_date") {
                qf.valuation = Date::parse(f[1]);
                have_valuation = true;
            } else if (f[0] == "recovery") {
                qf.recovery = parse_double(f[1], path, line_no);
                have_recovery = true;
            } else if (f[0] == "coupon") {
                qf.coupon = parse_double(f[1], path, line_no);
                have_coupon = true;
            } else {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": unknown preamble key '" + f[0] + "'");
            }
            continue;
        }
        if (f.size() != 3)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected 'tenor,uf_bid,uf_ask' row, got " +
                             std::to_string(f.size()) + " fields");
        MarketQuote q;
        q.tenor = f[0];
        q.uf_bid = parse_double(f[1], path, line_no);
        q.uf_ask = parse_double(f[2], path, line_no);
        if (q.tenor.empty())
            throw ParseError(path + ":" + std::to_string(line_no) + ": empty tenor");
        if (q.uf_bid > q.uf_ask)
            log::warn("%s:%d: quote '%s' has bid above ask; usable for mid bootstrapping only",
                      path.c_str(), line_no, q.tenor.c_str());
        qf.quotes.push_back(std::move(q));
    }
    if (!in_rows)
        throw ParseError(path + ": missing '" + std::string(kQuoteHeader) + "' header");
    if (!have_valuation) throw ParseError(path + ": preamble lacks valuation_date");
    if (!have_recovery) throw ParseError(path + ": preamble lacks recovery");
    if (!have_coupon) throw ParseError(path + ": preamble lacks coupon");
    if (qf.quotes.empty()) throw ParseError(path + ": no quote rows");

    for (MarketQuote& q : qf.quotes) {
        q.coupon = qf.coupon;
        q.recovery = qf.recovery;
    }
    std::stable_sort(qf.quotes.begin(), qf.quotes.end(),
                     [&](const MarketQuote& l, const MarketQuote& r) {
                         return quote_maturity(l, qf.valuation) <
                                quote_maturity(r, qf.valuation);
                     });
    return qf;
}

DiscountCurve parse_discount_curve(const std::string& path,
                                   const std::optional<Date>& valuation) {
    std::ifstream in = open_or_throw(path);
    enum class Mode { Unknown, Years, Dates } mode = Mode::Unknown;
    std::vector<double> times, dfs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line);
        if (f.size() != 2)
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected 2 fields");
        if (mode == Mode::Unknown) {
            if (f[0] == "tenor_years" && f[1] == "df") {
                mode = Mode::Years;
                continue;
            }
            if (f[0] == "date" && f[1] == "df") {
                mode = Mode::Dates;
                continue;
            }
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected header 'tenor_years,df' or 'date,df'");
        }
        double t;
        if (mode == Mode::Years) {
            t = parse_double(f[0], path, line_no);
        } else {
            if (!valuation)
                throw ParseError(path + ": dated discount rows need a valuation date "
                                 "(parse the quote file first)");
            t = year_fraction(*valuation, Date::parse(f[0]), DayCount::Act365F);
        }
        const double df = parse_double(f[1], path, line_no);
        if (!times.empty() && t <= times.back())
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": discount rows out of time order");
        if (df > 1.0)
            log::warn("%s:%d: discount factor %.10g above one", path.c_str(), line_no, df);
        if (!dfs.empty() && df > dfs.back())
            log::warn("%s:%d: discount factor increases with maturity", path.c_str(), line_no);
        times.push_back(t);
        dfs.push_back(df);
    }
    if (mode == Mode::Unknown)
        throw ParseError(path + ": missing 'tenor_years,df' or 'date,df' header");
    if (times.empty()) throw ParseError(path + ": no discount rows");
    return DiscountCurve(std::move(times), std::move(dfs), valuation);
}

HazardCurve ResultFile::hazard_curve() const {
    if (pillars.empty()) throw ParseError("result holds no pillars");
    std::vector<double> knots, lambdas;
    for (const ResultPillar& p : pillars) {
        knots.push_back(
            year_fraction(valuation, tenor_maturity(valuation, p.tenor), DayCount::Act365F));
        lambdas.push_back(p.lambda);
    }
    return HazardCurve(std::move(knots), std::move(lambdas),
                       curve_form_from_string(curve_form));
}

std::string file_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::uint64_t h = 14695981039346656037ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_result_json(const ResultFile& r, const std::string& path) {
    nlohmann::json j;
    j["valuation_date"] = r.valuation.to_string();
    j["distortion"] = r.distortion;
    j["curve_form"] = r.curve_form;
    j["grid_step_days"] = r.grid_step_days;
    j["tolerances"] = {{"f_tol", r.f_tol}, {"x_tol", r.x_tol}};
    j["input_hashes"] = {{"quotes", r.quotes_hash}, {"discount_curve", r.discount_hash}};
    j["pillars"] = nlohmann::json::array();
    for (const ResultPillar& p : r.pillars)
        j["pillars"].push_back({{"tenor", p.tenor},
                                {"lambda", p.lambda},
                                {"gamma", p.gamma},
                                {"residual_bid", p.residual_bid},
                                {"residual_ask", p.residual_ask}});
    j["survival"] = nlohmann::json::array();
    for (const SurvivalSample& s : r.survival)
        j["survival"].push_back(
            {{"date", s.date.to_string()}, {"t", s.t}, {"survival", s.survival}});

    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

ResultFile read_result_json(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    ResultFile r;
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        r.valuation = Date::parse(j.at("valuation_date").get<std::string>());
        r.distortion = j.at("distortion").get<std::string>();
        r.curve_form = j.at("curve_form").get<std::string>();
        r.grid_step_days = j.at("grid_step_days").get<int>();
        r.f_tol = j.at("tolerances").at("f_tol").get<double>();
        r.x_tol = j.at("tolerances").at("x_tol").get<double>();
        r.quotes_hash = j.at("input_hashes").at("quotes").get<std::string>();
        r.discount_hash = j.at("input_hashes").at("discount_curve").get<std::string>();
        for (const nlohmann::json& p : j.at("pillars")) {
            ResultPillar rp;
            rp.tenor = p.at("tenor").get<std::string>();
            rp.lambda = p.at("lambda").get<double>();
            rp.gamma = p.at("gamma").get<double>();
            rp.residual_bid = p.at("residual_bid").get<double>();
            rp.residual_ask = p.at("residual_ask").get<double>();
            r.pillars.push_back(std::move(rp));
        }
        for (const nlohmann::json& s : j.at("survival")) {
            SurvivalSample ss;
            ss.date = Date::parse(s.at("date").get<std::string>());
            ss.t = s.at("t").get<double>();
            ss.survival = s.at("survival").get<double>();
            r.survival.push_back(ss);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return r;
}

void write_result_csv(const ResultFile& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    out << "valuation_date," << r.valuation.to_string() << '\n';
    out << "distortion," << r.distortion << '\n';
    out << "curve_form," << r.curve_form << '\n';
    out << "grid_step_days," << r.grid_step_days << '\n';
    out << "f_tol," << num(r.f_tol) << '\n';
    out << "x_tol," << num(r.x_tol) << '\n';
    out << "quotes_hash," << r.quotes_hash << '\n';
    out << "discount_hash," << r.discount_hash << '\n';
    out << "tenor,lambda,gamma,residual_bid,residual_ask\n";
    for (const ResultPillar& p : r.pillars)
        out << p.tenor << ',' << num(p.lambda) << ',' << num(p.gamma) << ','
            << num(p.residual_bid) << ',' << num(p.residual_ask) << '\n';
    out << "date,t,survival\n";
    for (const SurvivalSample& s : r.survival)
        out << s.date.to_string() << ',' << num(s.t) << ',' << num(s.survival) << '\n';
}

} // namespace conic
