#include "crimelab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace crimelab {

Criterion criterion_from_name(const std::string& name) {
    if (name == "entropy") return Criterion::entropy;
    if (name == "gini") return Criterion::gini;
    throw ConfigError("unknown split criterion: " + name);
}

std::string criterion_name(Criterion c) {
    return c == Criterion::entropy ? "entropy" : "gini";
}

namespace {

double xlogx(double v) { return v > 0.0 ? v * std::log2(v) : 0.0; }

}  // namespace

double impurity_from_counts(Criterion c, const std::vector<long>& counts, long n) {
    if (n <= 0) return 0.0;
    double dn = static_cast<double>(n);
    if (c == Criterion::entropy) {
        // H = (n log2 n - sum c log2 c) / n, in bits.
        double sum = 0.0;
        for (long cnt : counts) sum += xlogx(static_cast<double>(cnt));
        return (xlogx(dn) - sum) / dn;
    }
    double ss = 0.0;
    for (long cnt : counts) ss += static_cast<double>(cnt) * static_cast<double>(cnt);
    return 1.0 - ss / (dn * dn);
}

double split_midpoint(double a, double b) {
    double mid = 0.5 * (a + b);
    if (!(mid < b)) mid = a;  // rounding reached b; pull back so the right side stays non-empty
    return mid;
}

const TreeNode& Tree::leaf_for(const double* x) const {
    int i = 0;
    while (!nodes[static_cast<size_t>(i)].is_leaf()) {
        const TreeNode& node = nodes[static_cast<size_t>(i)];
        i = x[node.feature] <= node.threshold ? node.left : node.right;
    }
    return nodes[static_cast<size_t>(i)];
}

int Tree::max_depth() const {
    if (nodes.empty()) return -1;
    int deepest = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};  // (node, depth)
    while (!stack.empty()) {
        auto [i, depth] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, depth);
        const TreeNode& node = nodes[static_cast<size_t>(i)];
        if (!node.is_leaf()) {
            stack.emplace_back(node.left, depth + 1);
            stack.emplace_back(node.right, depth + 1);
        }
    }
    return deepest;
}

size_t Tree::n_leaves() const {
    size_t count = 0;
    for (const auto& node : nodes) {
        if (node.is_leaf()) ++count;
    }
    return count;
}

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

class Grower {
public:
    Grower(const Matrix& X, const std::vector<int>& y, const TreeGrowParams& p, Rng* rng)
        : X_(X), y_(y), p_(p), rng_(rng) {
        if (p_.criterion == Criterion::entropy) {
            // xlogx table over integer counts: splits see only count
            // arithmetic, so gains are reproducible bit for bit.
            xlogx_table_.resize(X_.rows + 1);
            for (size_t c = 0; c <= X_.rows; ++c) {
                xlogx_table_[c] = xlogx(static_cast<double>(c));
            }
        }
        left_counts_.resize(static_cast<size_t>(p_.n_classes));
        right_counts_.resize(static_cast<size_t>(p_.n_classes));
    }

    Tree grow(const std::vector<size_t>& rows) {
        Tree tree;
        if (p_.max_leaf_nodes >= 1) {
            grow_best_first(tree, rows);
        } else {
            grow_dfs(tree, rows, 0);
        }
        return tree;
    }

private:
    const Matrix& X_;
    const std::vector<int>& y_;
    TreeGrowParams p_;
    Rng* rng_;
    std::vector<double> xlogx_table_;
    std::vector<long> left_counts_, right_counts_;
    std::vector<std::pair<double, int>> scratch_;  // (value, class)

    double node_impurity(const std::vector<long>& counts, long n) const {
        if (n <= 0) return 0.0;
        double dn = static_cast<double>(n);
        if (p_.criterion == Criterion::entropy) {
            double sum = 0.0;
            for (long cnt : counts) sum += xlogx_table_[static_cast<size_t>(cnt)];
            return (xlogx_table_[static_cast<size_t>(n)] - sum) / dn;
        }
        double ss = 0.0;
        for (long cnt : counts) ss += static_cast<double>(cnt) * static_cast<double>(cnt);
        return 1.0 - ss / (dn * dn);
    }

    std::vector<long> count_rows(const std::vector<size_t>& rows) const {
        std::vector<long> counts(static_cast<size_t>(p_.n_classes), 0);
        for (size_t r : rows) ++counts[static_cast<size_t>(y_[r])];
        return counts;
    }

    std::vector<int> candidate_features() {
        int d = static_cast<int>(X_.cols);
        int m = p_.n_candidate_features;
        std::vector<int> feats;
        if (m <= 0 || m >= d) {
            feats.resize(static_cast<size_t>(d));
            for (int f = 0; f < d; ++f) feats[static_cast<size_t>(f)] = f;
            return feats;
        }
        // Partial Fisher-Yates; sampled set sorted so the lower-feature
        // tie-break stays meaningful.
        std::vector<int> pool(static_cast<size_t>(d));
        for (int f = 0; f < d; ++f) pool[static_cast<size_t>(f)] = f;
        for (int i = 0; i < m; ++i) {
            size_t j = static_cast<size_t>(i) + rng_->index(static_cast<size_t>(d - i));
            std::swap(pool[static_cast<size_t>(i)], pool[j]);
        }
        feats.assign(pool.begin(), pool.begin() + m);
        std::sort(feats.begin(), feats.end());
        return feats;
    }

    SplitChoice best_split(const std::vector<size_t>& rows, const std::vector<long>& counts,
                           double parent_impurity) {
        SplitChoice best;
        long n = static_cast<long>(rows.size());
        double dn = static_cast<double>(n);
        long msl = p_.min_samples_leaf;
        for (int f : candidate_features()) {
            if (p_.random_thresholds) {
                double lo = X_.at(rows[0], static_cast<size_t>(f));
                double hi = lo;
                for (size_t r : rows) {
                    double v = X_.at(r, static_cast<size_t>(f));
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
                if (!(hi > lo)) continue;  // constant feature at this node
                double thr = lo + rng_->unit() * (hi - lo);
                if (thr >= hi) thr = std::nextafter(hi, lo);
                std::fill(left_counts_.begin(), left_counts_.end(), 0);
                long nl = 0;
                for (size_t r : rows) {
                    if (X_.at(r, static_cast<size_t>(f)) <= thr) {
                        ++left_counts_[static_cast<size_t>(y_[r])];
                        ++nl;
                    }
                }
                long nr = n - nl;
                if (nl < msl || nr < msl) continue;
                for (size_t c = 0; c < left_counts_.size(); ++c) {
                    right_counts_[c] = counts[c] - left_counts_[c];
                }
                double gain = parent_impurity -
                              (static_cast<double>(nl) / dn) * node_impurity(left_counts_, nl) -
                              (static_cast<double>(nr) / dn) * node_impurity(right_counts_, nr);
                if (gain > best.gain) best = SplitChoice{true, f, thr, gain};
            } else {
                scratch_.clear();
                scratch_.reserve(rows.size());
                for (size_t r : rows) {
                    scratch_.emplace_back(X_.at(r, static_cast<size_t>(f)), y_[r]);
                }
                std::sort(scratch_.begin(), scratch_.end());
                std::fill(left_counts_.begin(), left_counts_.end(), 0);
                right_counts_ = counts;
                for (long i = 1; i < n; ++i) {
                    int cls = scratch_[static_cast<size_t>(i - 1)].second;
                    ++left_counts_[static_cast<size_t>(cls)];
                    --right_counts_[static_cast<size_t>(cls)];
                    if (scratch_[static_cast<size_t>(i)].first ==
                        scratch_[static_cast<size_t>(i - 1)].first) {
                        continue;  // inside a run of equal values
                    }
                    long nl = i, nr = n - i;
                    if (nl < msl || nr < msl) continue;
                    double gain =
                        parent_impurity -
                        (static_cast<double>(nl) / dn) * node_impurity(left_counts_, nl) -
                        (static_cast<double>(nr) / dn) * node_impurity(right_counts_, nr);
                    if (gain > best.gain) {
                        best = SplitChoice{
                            true, f,
                            split_midpoint(scratch_[static_cast<size_t>(i - 1)].first,
                                           scratch_[static_cast<size_t>(i)].first),
                            gain};
                    }
                }
            }
        }
        return best;
    }

    int make_leaf(Tree& tree, int node, const std::vector<long>& counts, long n) {
        TreeNode& leaf = tree.nodes[static_cast<size_t>(node)];
        leaf.feature = -1;
        leaf.majority = static_cast<int>(
            std::max_element(counts.begin(), counts.end()) - counts.begin());
        leaf.proba.resize(counts.size());
        for (size_t c = 0; c < counts.size(); ++c) {
            leaf.proba[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
        }
        return node;
    }

    bool is_pure(const std::vector<long>& counts) const {
        int present = 0;
        for (long c : counts) {
            if (c > 0) ++present;
        }
        return present <= 1;
    }

    void partition(const std::vector<size_t>& rows, int feature, double threshold,
                   std::vector<size_t>& left, std::vector<size_t>& right) const {
        for (size_t r : rows) {
            (X_.at(r, static_cast<size_t>(feature)) <= threshold ? left : right).push_back(r);
        }
    }

    int grow_dfs(Tree& tree, const std::vector<size_t>& rows, int depth) {
        int node = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        auto counts = count_rows(rows);
        long n = static_cast<long>(rows.size());
        bool expandable = !is_pure(counts) && n >= 2L * p_.min_samples_leaf &&
                          (p_.max_depth < 0 || depth < p_.max_depth);
        if (expandable) {
            SplitChoice split = best_split(rows, counts, node_impurity(counts, n));
            if (split.found) {
                std::vector<size_t> left_rows, right_rows;
                partition(rows, split.feature, split.threshold, left_rows, right_rows);
                tree.nodes[static_cast<size_t>(node)].feature = split.feature;
                tree.nodes[static_cast<size_t>(node)].threshold = split.threshold;
                tree.nodes[static_cast<size_t>(node)].majority = static_cast<int>(
                    std::max_element(counts.begin(), counts.end()) - counts.begin());
                int left = grow_dfs(tree, left_rows, depth + 1);
                tree.nodes[static_cast<size_t>(node)].left = left;
                int right = grow_dfs(tree, right_rows, depth + 1);
                tree.nodes[static_cast<size_t>(node)].right = right;
                return node;
            }
        }
        return make_leaf(tree, node, counts, n);
    }

    struct Candidate {
        double gain;
        long order;  // push sequence; earlier wins gain ties
        int node;
        int depth;
        std::vector<size_t> rows;
        std::vector<long> counts;
        SplitChoice split;
    };
    struct CandidateOrder {
        bool operator()(const Candidate& a, const Candidate& b) const {
            if (a.gain != b.gain) return a.gain < b.gain;
            return a.order > b.order;
        }
    };

    void grow_best_first(Tree& tree, const std::vector<size_t>& rows) {
        std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> frontier;
        long order = 0;

        auto open_leaf = [&](const std::vector<size_t>& node_rows, int depth) {
            int node = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            auto counts = count_rows(node_rows);
            long n = static_cast<long>(node_rows.size());
            make_leaf(tree, node, counts, n);
            bool expandable = !is_pure(counts) && n >= 2L * p_.min_samples_leaf &&
                              (p_.max_depth < 0 || depth < p_.max_depth);
            if (expandable) {
                SplitChoice split = best_split(node_rows, counts, node_impurity(counts, n));
                if (split.found) {
                    frontier.push(Candidate{split.gain, order++, node, depth, node_rows,
                                            std::move(counts), split});
                }
            }
            return node;
        };

        open_leaf(rows, 0);
        long leaves = 1;
        while (leaves < p_.max_leaf_nodes && !frontier.empty()) {
            Candidate cand = frontier.top();
            frontier.pop();
            std::vector<size_t> left_rows, right_rows;
            partition(cand.rows, cand.split.feature, cand.split.threshold, left_rows,
                      right_rows);
            int left = open_leaf(left_rows, cand.depth + 1);
            int right = open_leaf(right_rows, cand.depth + 1);
            TreeNode& node = tree.nodes[static_cast<size_t>(cand.node)];
            node.feature = cand.split.feature;
            node.threshold = cand.split.threshold;
            node.proba.clear();
            node.left = left;
            node.right = right;
            ++leaves;  // one leaf became internal, two appeared
        }
    }
};

}  // namespace

Tree grow_tree(const Matrix& X, const std::vector<int>& y, const std::vector<size_t>& rows,
               const TreeGrowParams& params, Rng* rng) {
    if (rows.empty()) throw std::invalid_argument("grow_tree: no rows");
    if (params.n_classes < 1) throw std::invalid_argument("grow_tree: n_classes unset");
    if ((params.n_candidate_features > 0 &&
         params.n_candidate_features < static_cast<int>(X.cols)) ||
        params.random_thresholds) {
        if (!rng) throw std::invalid_argument("grow_tree: sampling requested without rng");
    }
    Grower grower(X, y, params, rng);
    return grower.grow(rows);
}

Tree grow_weighted_stump(const Matrix& X, const std::vector<int>& y,
                         const std::vector<double>& w, int n_classes) {
    size_t n = X.rows;
    if (n == 0) throw std::invalid_argument("grow_weighted_stump: empty input");
    size_t K = static_cast<size_t>(n_classes);

    std::vector<double> parent_w(K, 0.0);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        parent_w[static_cast<size_t>(y[i])] += w[i];
        total += w[i];
    }
    auto gini_w = [&](const std::vector<double>& cw, double wsum) {
        if (wsum <= 0.0) return 0.0;
        double ss = 0.0;
        for (double c : cw) ss += c * c;
        return 1.0 - ss / (wsum * wsum);
    };
    double parent_impurity = gini_w(parent_w, total);

    struct { bool found = false; int feature = -1; double threshold = 0.0; double gain = 0.0; } best;
    std::vector<std::pair<double, int>> vals;
    std::vector<double> left_w(K), right_w(K);
    for (size_t f = 0; f < X.cols; ++f) {
        vals.clear();
        vals.reserve(n);
        for (size_t i = 0; i < n; ++i) vals.emplace_back(X.at(i, f), static_cast<int>(i));
        std::sort(vals.begin(), vals.end());
        std::fill(left_w.begin(), left_w.end(), 0.0);
        double wl = 0.0;
        for (size_t i = 1; i < n; ++i) {
            size_t row = static_cast<size_t>(vals[i - 1].second);
            left_w[static_cast<size_t>(y[row])] += w[row];
            wl += w[row];
            if (vals[i].first == vals[i - 1].first) continue;
            double wr = total - wl;
            if (wl <= 0.0 || wr <= 0.0) continue;
            for (size_t c = 0; c < K; ++c) right_w[c] = parent_w[c] - left_w[c];
            double gain = parent_impurity - (wl / total) * gini_w(left_w, wl) -
                          (wr / total) * gini_w(right_w, wr);
            if (gain > best.gain) {
                best = {true, static_cast<int>(f),
                        split_midpoint(vals[i - 1].first, vals[i].first), gain};
            }
        }
    }

    Tree tree;
    auto weighted_leaf = [&](const std::vector<double>& cw, double wsum) {
        TreeNode leaf;
        leaf.feature = -1;
        leaf.majority = static_cast<int>(
            std::max_element(cw.begin(), cw.end()) - cw.begin());
        leaf.proba.resize(K);
        for (size_t c = 0; c < K; ++c) leaf.proba[c] = wsum > 0.0 ? cw[c] / wsum : 0.0;
        return leaf;
    };
    if (!best.found) {
        tree.nodes.push_back(weighted_leaf(parent_w, total));
        return tree;
    }
    std::vector<double> lw(K, 0.0), rw(K, 0.0);
    double wl = 0.0, wr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (X.at(i, static_cast<size_t>(best.feature)) <= best.threshold) {
            lw[static_cast<size_t>(y[i])] += w[i];
            wl += w[i];
        } else {
            rw[static_cast<size_t>(y[i])] += w[i];
            wr += w[i];
        }
    }
    TreeNode root;
    root.feature = best.feature;
    root.threshold = best.threshold;
    root.left = 1;
    root.right = 2;
    root.majority = static_cast<int>(
        std::max_element(parent_w.begin(), parent_w.end()) - parent_w.begin());
    tree.nodes.push_back(root);
    tree.nodes.push_back(weighted_leaf(lw, wl));
    tree.nodes.push_back(weighted_leaf(rw, wr));
    return tree;
}

Matrix DecisionTreeModel::predict_proba(const Matrix& X) const {
    check_features(X);
    Matrix out(X.rows, static_cast<size_t>(n_classes_));
    for (size_t r = 0; r < X.rows; ++r) {
        const TreeNode& leaf = tree_.leaf_for(X.row(r));
        std::copy(leaf.proba.begin(), leaf.proba.end(), out.row(r));
    }
    return out;
}

std::unique_ptr<DecisionTreeModel> train_decision_tree(const Matrix& X,
                                                       const std::vector<int>& y,
                                                       int n_classes,
                                                       const ModelSpec& spec) {
    if (X.rows == 0) throw std::invalid_argument("train_decision_tree: empty input");
    TreeGrowParams params;
    params.criterion =
        spec.criterion.empty() ? Criterion::entropy : criterion_from_name(spec.criterion);
    params.n_classes = n_classes;
    params.max_depth = spec.max_depth;
    params.min_samples_leaf = spec.min_samples_leaf;
    params.max_leaf_nodes = spec.max_leaf_nodes;
    std::vector<size_t> rows(X.rows);
    for (size_t i = 0; i < X.rows; ++i) rows[i] = i;
    Tree tree = grow_tree(X, y, rows, params, nullptr);
    return std::make_unique<DecisionTreeModel>(std::move(tree), n_classes, X.cols);
}

}  // namespace crimelab
