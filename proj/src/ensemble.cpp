#include "crimelab/ensemble.hpp"

#include <algorithm>
#include <cmath>

namespace crimelab {

namespace {

constexpr uint64_t kBagDrawStream = 0xBA60000;
constexpr uint64_t kBagBaseStream = 0xBA6B0000;
constexpr uint64_t kBaseStream = 0xE000;

std::vector<int> vote_rows(const std::vector<std::vector<int>>& base_preds, size_t n,
                           int n_classes) {
    std::vector<int> out(n);
    std::vector<int> counts(static_cast<size_t>(n_classes));
    for (size_t r = 0; r < n; ++r) {
        std::fill(counts.begin(), counts.end(), 0);
        for (const auto& preds : base_preds) ++counts[static_cast<size_t>(preds[r])];
        int best = 0;
        for (int c = 1; c < n_classes; ++c) {
            if (counts[static_cast<size_t>(c)] > counts[static_cast<size_t>(best)]) best = c;
        }
        out[r] = best;
    }
    return out;
}

}  // namespace

EnsembleSpec::Kind ensemble_kind_from_name(const std::string& name) {
    if (name == "model1_hard_vote") return EnsembleSpec::Kind::model1_hard_vote;
    if (name == "model2_bagged") return EnsembleSpec::Kind::model2_bagged;
    if (name == "model3_weighted_soft") return EnsembleSpec::Kind::model3_weighted_soft;
    if (name == "model4_bag_then_vote") return EnsembleSpec::Kind::model4_bag_then_vote;
    throw ConfigError("unknown ensemble kind: " + name);
}

std::string ensemble_kind_name(EnsembleSpec::Kind kind) {
    switch (kind) {
        case EnsembleSpec::Kind::model1_hard_vote: return "model1_hard_vote";
        case EnsembleSpec::Kind::model2_bagged: return "model2_bagged";
        case EnsembleSpec::Kind::model3_weighted_soft: return "model3_weighted_soft";
        case EnsembleSpec::Kind::model4_bag_then_vote: return "model4_bag_then_vote";
    }
    throw ConfigError("unknown ensemble kind");
}

Matrix HardVoteEnsemble::predict_proba(const Matrix& X) const {
    check_features(X);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    for (const auto& base : bases_) {
        Matrix p = base->predict_proba(X);
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += p.data[i];
    }
    double inv = 1.0 / static_cast<double>(bases_.size());
    for (double& v : out.data) v *= inv;
    return out;
}

std::vector<int> HardVoteEnsemble::predict(const Matrix& X) const {
    check_features(X);
    std::vector<std::vector<int>> base_preds;
    base_preds.reserve(bases_.size());
    for (const auto& base : bases_) base_preds.push_back(base->predict(X));
    return vote_rows(base_preds, X.rows, n_classes_);
}

void HardVoteEnsemble::set_threads(int threads) {
    for (auto& base : bases_) base->set_threads(threads);
}

Matrix HardVoteEnsemble::vote_fractions(const Matrix& X) const {
    check_features(X);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    for (const auto& base : bases_) {
        std::vector<int> preds = base->predict(X);
        for (size_t r = 0; r < X.rows; ++r) out.at(r, static_cast<size_t>(preds[r])) += 1.0;
    }
    double inv = 1.0 / static_cast<double>(bases_.size());
    for (double& v : out.data) v *= inv;
    return out;
}

Matrix WeightedSoftVoteEnsemble::predict_proba(const Matrix& X) const {
    check_features(X);
    double weight_total = 0.0;
    for (double w : weights_) weight_total += w;
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    for (size_t b = 0; b < bases_.size(); ++b) {
        Matrix p = bases_[b]->predict_proba(X);
        double w = weights_[b] / weight_total;
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += w * p.data[i];
    }
    return out;
}

void WeightedSoftVoteEnsemble::set_threads(int threads) {
    for (auto& base : bases_) base->set_threads(threads);
}

Matrix BaggedModel::predict_proba(const Matrix& X) const {
    check_features(X);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    for (const auto& member : members_) {
        Matrix projected = take_cols(X, member.features);
        Matrix p = member.model->predict_proba(projected);
        for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += p.data[i];
    }
    double inv = 1.0 / static_cast<double>(members_.size());
    for (double& v : out.data) v *= inv;
    return out;
}

std::vector<int> BaggedModel::predict(const Matrix& X) const {
    check_features(X);
    std::vector<std::vector<int>> member_preds;
    member_preds.reserve(members_.size());
    for (const auto& member : members_) {
        member_preds.push_back(member.model->predict(take_cols(X, member.features)));
    }
    return vote_rows(member_preds, X.rows, n_classes_);
}

void BaggedModel::set_threads(int threads) {
    for (auto& member : members_) member.model->set_threads(threads);
}

Matrix BaggedModel::vote_fractions(const Matrix& X) const {
    check_features(X);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    for (const auto& member : members_) {
        std::vector<int> preds = member.model->predict(take_cols(X, member.features));
        for (size_t r = 0; r < X.rows; ++r) out.at(r, static_cast<size_t>(preds[r])) += 1.0;
    }
    double inv = 1.0 / static_cast<double>(members_.size());
    for (double& v : out.data) v *= inv;
    return out;
}

uint64_t bagging_draw_seed(uint64_t seed, size_t bag) {
    return derive_seed(seed, kBagDrawStream + bag);
}

uint64_t bagging_base_seed(uint64_t seed, size_t bag) {
    return derive_seed(seed, kBagBaseStream + bag);
}

uint64_t ensemble_base_seed(uint64_t seed, size_t base) {
    return derive_seed(seed, kBaseStream + base);
}

std::unique_ptr<BaggedModel> bagging_fit(const BaseFactory& factory, const std::string& kind,
                                         const Matrix& X, const std::vector<int>& y,
                                         int n_classes, const BaggingParams& params,
                                         uint64_t seed, int threads) {
    if (X.rows == 0) throw std::invalid_argument("bagging_fit: empty input");
    if (params.n_bags < 1) throw std::invalid_argument("bagging_fit: n_bags must be positive");
    if (!(params.max_samples > 0.0 && params.max_samples <= 1.0) ||
        !(params.max_features > 0.0 && params.max_features <= 1.0)) {
        throw std::invalid_argument("bagging_fit: max_samples and max_features must lie in (0,1]");
    }
    size_t n_rows = static_cast<size_t>(
        std::ceil(params.max_samples * static_cast<double>(X.rows)));
    size_t n_feats = static_cast<size_t>(
        std::ceil(params.max_features * static_cast<double>(X.cols)));
    if (n_rows == 0 || n_feats == 0) {
        throw std::invalid_argument("bagging_fit: degenerate bag size");
    }

    std::vector<BagMember> members(static_cast<size_t>(params.n_bags));
    parallel_for(members.size(), threads, [&](size_t b) {
        Rng rng(bagging_draw_seed(seed, b));
        BagMember member;
        member.rows.reserve(n_rows);
        for (size_t i = 0; i < n_rows; ++i) member.rows.push_back(rng.index(X.rows));
        std::vector<size_t> pool(X.cols);
        for (size_t j = 0; j < X.cols; ++j) pool[j] = j;
        for (size_t i = 0; i < n_feats; ++i) {
            size_t j = i + rng.index(X.cols - i);
            std::swap(pool[i], pool[j]);
        }
        member.features.assign(pool.begin(), pool.begin() + static_cast<long>(n_feats));
        std::sort(member.features.begin(), member.features.end());

        Matrix bag_x = take_cols(take_rows(X, member.rows), member.features);
        std::vector<int> bag_y = take(y, member.rows);
        member.model = factory(bag_x, bag_y, n_classes, bagging_base_seed(seed, b));
        members[b] = std::move(member);
    });
    return std::make_unique<BaggedModel>(kind, std::move(members), n_classes, X.cols);
}

std::vector<ModelSpec> ensemble_default_bases(EnsembleSpec::Kind kind) {
    using MK = ModelSpec::Kind;
    switch (kind) {
        case EnsembleSpec::Kind::model1_hard_vote:
        case EnsembleSpec::Kind::model2_bagged:
            return {default_model_spec(MK::random_forest), default_model_spec(MK::decision_tree),
                    default_model_spec(MK::lda)};
        case EnsembleSpec::Kind::model3_weighted_soft:
            return {default_model_spec(MK::random_forest), default_model_spec(MK::knn),
                    default_model_spec(MK::extra_trees)};
        case EnsembleSpec::Kind::model4_bag_then_vote:
            return {default_model_spec(MK::random_forest), default_model_spec(MK::decision_tree),
                    default_model_spec(MK::extra_trees)};
    }
    throw ConfigError("unknown ensemble kind");
}

namespace {

std::vector<ModelSpec> resolve_bases(const EnsembleSpec& spec) {
    std::vector<ModelSpec> bases =
        spec.base_overrides.empty() ? ensemble_default_bases(spec.kind) : spec.base_overrides;
    for (size_t i = 0; i < bases.size(); ++i) {
        bases[i].seed = ensemble_base_seed(spec.seed, i);
    }
    return bases;
}

std::unique_ptr<HardVoteEnsemble> fit_trio_vote(const std::string& kind,
                                                const std::vector<ModelSpec>& bases,
                                                const Matrix& X, const std::vector<int>& y,
                                                int n_classes, int threads) {
    std::vector<std::unique_ptr<Classifier>> fitted;
    fitted.reserve(bases.size());
    for (const auto& base : bases) fitted.push_back(fit_model(base, X, y, n_classes, threads));
    return std::make_unique<HardVoteEnsemble>(kind, std::move(fitted), n_classes, X.cols);
}

}  // namespace

std::unique_ptr<HardVoteEnsemble> ensemble1_fit(const Matrix& X, const std::vector<int>& y,
                                                int n_classes, const EnsembleSpec& spec,
                                                int threads) {
    return fit_trio_vote(ensemble_kind_name(EnsembleSpec::Kind::model1_hard_vote),
                         resolve_bases(spec), X, y, n_classes, threads);
}

std::unique_ptr<Classifier> ensemble2_fit(const Matrix& X, const std::vector<int>& y,
                                          int n_classes, const EnsembleSpec& spec,
                                          int threads) {
    std::vector<ModelSpec> bases =
        spec.base_overrides.empty() ? ensemble_default_bases(spec.kind) : spec.base_overrides;
    std::string kind = ensemble_kind_name(EnsembleSpec::Kind::model2_bagged);
    if (spec.bag_each_base) {
        // Alternative composition: bag each trio member, then vote the bags.
        std::vector<std::unique_ptr<Classifier>> bagged;
        for (size_t i = 0; i < bases.size(); ++i) {
            ModelSpec base = bases[i];
            BaseFactory factory = [&base](const Matrix& bx, const std::vector<int>& by,
                                          int k, uint64_t bag_seed) {
                ModelSpec with_seed = base;
                with_seed.seed = bag_seed;
                return fit_model(with_seed, bx, by, k, 1);
            };
            bagged.push_back(bagging_fit(factory, "bagged_" + model_kind_name(base.kind), X, y,
                                         n_classes, spec.bagging,
                                         ensemble_base_seed(spec.seed, i), threads));
        }
        return std::make_unique<HardVoteEnsemble>(kind, std::move(bagged), n_classes, X.cols);
    }
    // Default reading: each bag trains the whole model-1 trio and votes inside.
    BaseFactory factory = [&bases](const Matrix& bx, const std::vector<int>& by, int k,
                                   uint64_t bag_seed) -> std::unique_ptr<Classifier> {
        EnsembleSpec trio;
        trio.kind = EnsembleSpec::Kind::model1_hard_vote;
        trio.seed = bag_seed;
        trio.base_overrides = bases;
        return ensemble1_fit(bx, by, k, trio, 1);
    };
    return bagging_fit(factory, kind, X, y, n_classes, spec.bagging, spec.seed, threads);
}

std::unique_ptr<WeightedSoftVoteEnsemble> ensemble3_fit(const Matrix& X,
                                                        const std::vector<int>& y,
                                                        int n_classes,
                                                        const EnsembleSpec& spec,
                                                        int threads) {
    auto bases = resolve_bases(spec);
    if (spec.weights.size() != bases.size()) {
        throw ConfigError("ensemble3: weight count does not match base count");
    }
    for (double w : spec.weights) {
        if (!(w > 0.0)) throw ConfigError("ensemble3: weights must be positive");
    }
    std::vector<std::unique_ptr<Classifier>> fitted;
    fitted.reserve(bases.size());
    for (const auto& base : bases) fitted.push_back(fit_model(base, X, y, n_classes, threads));
    return std::make_unique<WeightedSoftVoteEnsemble>(
        ensemble_kind_name(EnsembleSpec::Kind::model3_weighted_soft), std::move(fitted),
        spec.weights, n_classes, X.cols);
}

std::unique_ptr<HardVoteEnsemble> ensemble4_fit(const Matrix& X, const std::vector<int>& y,
                                                int n_classes, const EnsembleSpec& spec,
                                                int threads) {
    std::vector<ModelSpec> bases =
        spec.base_overrides.empty() ? ensemble_default_bases(spec.kind) : spec.base_overrides;
    std::vector<std::unique_ptr<Classifier>> bagged;
    for (size_t i = 0; i < bases.size(); ++i) {
        ModelSpec base = bases[i];
        BaseFactory factory = [&base](const Matrix& bx, const std::vector<int>& by, int k,
                                      uint64_t bag_seed) {
            ModelSpec with_seed = base;
            with_seed.seed = bag_seed;
            return fit_model(with_seed, bx, by, k, 1);
        };
        bagged.push_back(bagging_fit(factory, "bagged_" + model_kind_name(base.kind), X, y,
                                     n_classes, spec.bagging, ensemble_base_seed(spec.seed, i),
                                     threads));
    }
    return std::make_unique<HardVoteEnsemble>(
        ensemble_kind_name(EnsembleSpec::Kind::model4_bag_then_vote), std::move(bagged),
        n_classes, X.cols);
}

std::unique_ptr<Classifier> fit_ensemble(const EnsembleSpec& spec, const Matrix& X,
                                         const std::vector<int>& y, int n_classes,
                                         int threads) {
    switch (spec.kind) {
        case EnsembleSpec::Kind::model1_hard_vote:
            return ensemble1_fit(X, y, n_classes, spec, threads);
        case EnsembleSpec::Kind::model2_bagged:
            return ensemble2_fit(X, y, n_classes, spec, threads);
        case EnsembleSpec::Kind::model3_weighted_soft:
            return ensemble3_fit(X, y, n_classes, spec, threads);
        case EnsembleSpec::Kind::model4_bag_then_vote:
            return ensemble4_fit(X, y, n_classes, spec, threads);
    }
    throw ConfigError("unknown ensemble kind");
}

}  // namespace crimelab
