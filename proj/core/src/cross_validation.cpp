#include "trendline/cross_validation.hpp"

#include "trendline/csv.hpp"
#include "trendline/error.hpp"
#include "trendline/forecast.hpp"
#include "trendline/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace trendline {

std::vector<EpochDay> enumerate_cutoffs(const TimeSeries& ts, int initial_days, int period_days, int horizon_days) {
    if (ts.empty()) {
        fail(ErrorKind::EmptySeries, "cross-validation of an empty series");
    }
    if (initial_days <= 0 || period_days < 1 || horizon_days <= 0) {
        fail(ErrorKind::InvalidConfig, "initial, period and horizon must be positive day counts");
    }
    const EpochDay span = ts.last() - ts.first();
    if (static_cast<EpochDay>(initial_days) + horizon_days > span) {
        fail(ErrorKind::SpanTooShort, "series spans " + std::to_string(span) + " days; need initial + horizon = " +
                                          std::to_string(initial_days + horizon_days));
    }
    std::vector<EpochDay> cutoffs;
    for (EpochDay c = ts.last() - horizon_days; c >= ts.first() + initial_days; c -= period_days) {
        cutoffs.push_back(c);
    }
    std::reverse(cutoffs.begin(), cutoffs.end());
    return cutoffs;
}

namespace {

CvFold run_fold(const ModelConfig& config, const TimeSeries& ts, EpochDay cutoff, int horizon_days,
                const Covariates& covariates) {
    const auto ds = ts.timestamps();
    const auto vs = ts.values();
    const auto split = static_cast<std::size_t>(std::upper_bound(ds.begin(), ds.end(), cutoff) - ds.begin());
    TimeSeries train({ds.begin(), ds.begin() + static_cast<std::ptrdiff_t>(split)},
                     {vs.begin(), vs.begin() + static_cast<std::ptrdiff_t>(split)}, ts.name());

    CvFold fold;
    fold.cutoff = cutoff;
    std::vector<std::size_t> rows;
    for (std::size_t i = split; i < ds.size() && ds[i] <= cutoff + horizon_days; ++i) {
        rows.push_back(i);
    }
    try {
        const FittedModel model = fit(train, config, covariates);
        FutureGrid grid;
        for (std::size_t i : rows) {
            grid.timestamps.push_back(ds[i]);
        }
        grid.covariates = covariates;
        const Forecast fc = predict(model, grid);
        const IntervalBand* band = fc.band(0.95);
        if (!band && !fc.bands.empty()) {
            band = &fc.bands.back();
        }
        fold.level = band ? band->level : 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            CvRow row;
            row.ds = ds[rows[r]];
            row.y = vs[rows[r]];
            row.yhat = fc.yhat[r];
            row.lower = band ? band->lower[r] : row.yhat;
            row.upper = band ? band->upper[r] : row.yhat;
            fold.rows.push_back(row);
        }
    } catch (const Error& e) {
        fail(e.kind(), "fold with cutoff " + format_iso_date(cutoff) + ": " + e.what());
    }
    return fold;
}

} // namespace

std::vector<CvFold> rolling_cv(const ModelConfig& config, const TimeSeries& ts, int initial_days,
                               int period_days, int horizon_days, const Covariates& covariates) {
    ts.require_dense();
    const auto cutoffs = enumerate_cutoffs(ts, initial_days, period_days, horizon_days);
    std::vector<CvFold> folds;
    folds.reserve(cutoffs.size());
    for (EpochDay c : cutoffs) {
        folds.push_back(run_fold(config, ts, c, horizon_days, covariates));
    }
    return folds;
}

std::vector<HorizonMetrics> performance_by_horizon(const std::vector<CvFold>& folds) {
    if (folds.empty()) {
        fail(ErrorKind::EmptyInput, "no folds to summarise");
    }
    struct Group {
        std::vector<double> y, yhat, lower, upper;
    };
    std::map<int, Group> groups;
    for (const auto& fold : folds) {
        for (const auto& row : fold.rows) {
            auto& g = groups[static_cast<int>(row.ds - fold.cutoff)];
            g.y.push_back(row.y);
            g.yhat.push_back(row.yhat);
            g.lower.push_back(row.lower);
            g.upper.push_back(row.upper);
        }
    }
    if (groups.empty()) {
        fail(ErrorKind::EmptyInput, "folds contain no forecast rows");
    }
    std::vector<HorizonMetrics> out;
    for (const auto& [h, g] : groups) {
        out.push_back({h, evaluate_forecast("h" + std::to_string(h), g.y, g.yhat, g.lower, g.upper)});
    }
    return out;
}

std::string folds_to_csv(const std::vector<CvFold>& folds) {
    std::string out = "cutoff,ds,y,yhat,yhat_lower_95,yhat_upper_95\n";
    for (const auto& fold : folds) {
        const auto cutoff = format_iso_date(fold.cutoff);
        for (const auto& row : fold.rows) {
            out += cutoff + ',' + format_iso_date(row.ds) + ',' + csv::format_double(row.y) + ',' +
                   csv::format_double(row.yhat) + ',' + csv::format_double(row.lower) + ',' +
                   csv::format_double(row.upper) + '\n';
        }
    }
    return out;
}

} // namespace trendline
