#include "crimelab/forest.hpp"

#include <algorithm>
#include <cmath>

namespace crimelab {

namespace {

constexpr uint64_t kTreeStream = 0xF0000;

Matrix mean_tree_proba(const std::vector<Tree>& trees, const Matrix& X, int n_classes,
                       int threads) {
    Matrix out(X.rows, static_cast<size_t>(n_classes));
    double inv = 1.0 / static_cast<double>(trees.size());
    parallel_for(X.rows, threads, [&](size_t r) {
        double* row = out.row(r);
        for (const Tree& tree : trees) {
            const TreeNode& leaf = tree.leaf_for(X.row(r));
            for (size_t c = 0; c < leaf.proba.size(); ++c) row[c] += leaf.proba[c];
        }
        for (int c = 0; c < n_classes; ++c) row[static_cast<size_t>(c)] *= inv;
    });
    return out;
}

std::unique_ptr<ForestModel> fit_forest(const std::string& kind, const Matrix& X,
                                        const std::vector<int>& y, int n_classes,
                                        const ModelSpec& spec, int threads,
                                        bool random_thresholds, Criterion default_criterion,
                                        bool bootstrap) {
    if (X.rows == 0) throw std::invalid_argument(kind + ": empty input");
    if (spec.n_trees < 1) throw std::invalid_argument(kind + ": n_trees must be positive");

    TreeGrowParams params;
    params.criterion = spec.criterion.empty() ? default_criterion
                                              : criterion_from_name(spec.criterion);
    params.n_classes = n_classes;
    params.max_depth = spec.max_depth;
    params.min_samples_leaf = spec.min_samples_leaf;
    params.max_leaf_nodes = spec.max_leaf_nodes;
    params.random_thresholds = random_thresholds;
    if (spec.n_candidate_features == 0) {
        params.n_candidate_features = std::max(
            1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(X.cols)))));
    } else {
        params.n_candidate_features = spec.n_candidate_features;
    }

    size_t n_trees = static_cast<size_t>(spec.n_trees);
    std::vector<Tree> trees(n_trees);
    std::vector<std::vector<char>> in_bag;
    if (spec.compute_oob) in_bag.assign(n_trees, std::vector<char>(X.rows, 0));

    parallel_for(n_trees, threads, [&](size_t t) {
        Rng rng(derive_seed(spec.seed, kTreeStream + t));
        std::vector<size_t> rows;
        rows.reserve(X.rows);
        if (bootstrap) {
            for (size_t i = 0; i < X.rows; ++i) rows.push_back(rng.index(X.rows));
        } else {
            for (size_t i = 0; i < X.rows; ++i) rows.push_back(i);
        }
        if (spec.compute_oob) {
            for (size_t r : rows) in_bag[t][r] = 1;
        }
        trees[t] = grow_tree(X, y, rows, params, &rng);
    });

    double oob = -1.0;
    if (spec.compute_oob && bootstrap) {
        size_t scored = 0, correct = 0;
        std::vector<double> votes(static_cast<size_t>(n_classes));
        for (size_t r = 0; r < X.rows; ++r) {
            std::fill(votes.begin(), votes.end(), 0.0);
            size_t voters = 0;
            for (size_t t = 0; t < n_trees; ++t) {
                if (in_bag[t][r]) continue;
                const TreeNode& leaf = trees[t].leaf_for(X.row(r));
                for (size_t c = 0; c < leaf.proba.size(); ++c) votes[c] += leaf.proba[c];
                ++voters;
            }
            if (voters == 0) continue;
            ++scored;
            if (argmax_row(votes.data(), votes.size()) == y[r]) ++correct;
        }
        if (scored > 0) oob = static_cast<double>(correct) / static_cast<double>(scored);
    }

    return std::make_unique<ForestModel>(kind, std::move(trees), n_classes, X.cols, oob);
}

}  // namespace

Matrix ForestModel::predict_proba(const Matrix& X) const {
    check_features(X);
    return mean_tree_proba(trees_, X, n_classes_, threads_);
}

std::unique_ptr<ForestModel> train_random_forest(const Matrix& X, const std::vector<int>& y,
                                                 int n_classes, const ModelSpec& spec,
                                                 int threads) {
    return fit_forest("random_forest", X, y, n_classes, spec, threads,
                      /*random_thresholds=*/false, Criterion::entropy, spec.bootstrap);
}

std::unique_ptr<ForestModel> train_extra_trees(const Matrix& X, const std::vector<int>& y,
                                               int n_classes, const ModelSpec& spec,
                                               int threads) {
    return fit_forest("extra_trees", X, y, n_classes, spec, threads,
                      /*random_thresholds=*/true, Criterion::gini, /*bootstrap=*/false);
}

}  // namespace crimelab
