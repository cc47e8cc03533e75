#pragma once

#include <string>
#include <vector>

#include "crimelab/model.hpp"

namespace crimelab {

enum class Criterion { entropy, gini };

Criterion criterion_from_name(const std::string& name);
std::string criterion_name(Criterion c);

/// Impurity from integer class counts (entropy in bits). Pure and empty
/// nodes score 0.
double impurity_from_counts(Criterion c, const std::vector<long>& counts, long n);

/// Split threshold between adjacent distinct sorted values a < b: their
/// midpoint, pulled back to a if rounding lands on b (rows go left on
/// x <= threshold, so a threshold of b would empty the right side).
double split_midpoint(double a, double b);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int majority = 0;
    std::vector<double> proba;  // leaf only, K entries

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    const TreeNode& leaf_for(const double* x) const;
    int max_depth() const;   // root at depth 0; empty tree -1
    size_t n_leaves() const;
};

struct TreeGrowParams {
    Criterion criterion = Criterion::entropy;
    int n_classes = 0;
    int max_depth = -1;            // -1 = unbounded
    int min_samples_leaf = 1;
    long max_leaf_nodes = -1;      // >= 1 switches to best-first growth
    int n_candidate_features = -1; // -1 = all features at every split
    bool random_thresholds = false;
};

/// CART growth over the given rows. Splits maximize impurity decrease; exact
/// gain ties keep the earliest candidate (features ascending, thresholds
/// ascending). rng feeds feature sampling and random thresholds and may be
/// null when neither is used.
Tree grow_tree(const Matrix& X, const std::vector<int>& y, const std::vector<size_t>& rows,
               const TreeGrowParams& params, Rng* rng);

/// Depth-1 weighted tree for boosting: best single split by weighted Gini
/// decrease, leaves predict the weight-majority class. Falls back to a single
/// leaf when no split helps.
Tree grow_weighted_stump(const Matrix& X, const std::vector<int>& y,
                         const std::vector<double>& w, int n_classes);

class DecisionTreeModel : public Classifier {
public:
    DecisionTreeModel(Tree tree, int n_classes, size_t n_features)
        : tree_(std::move(tree)), n_classes_(n_classes), n_features_(n_features) {}

    std::string kind() const override { return "decision_tree"; }
    int n_classes() const override { return n_classes_; }
    size_t n_features() const override { return n_features_; }
    Matrix predict_proba(const Matrix& X) const override;

    const Tree& tree() const { return tree_; }

private:
    Tree tree_;
    int n_classes_;
    size_t n_features_;
};

/// min_samples_leaf = 7, entropy, unbounded depth unless configured.
std::unique_ptr<DecisionTreeModel> train_decision_tree(const Matrix& X,
                                                       const std::vector<int>& y,
                                                       int n_classes,
                                                       const ModelSpec& spec);

}  // namespace crimelab
