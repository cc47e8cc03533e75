#include "crimelab/model_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "binio.hpp"
#include "crimelab/adaboost.hpp"
#include "crimelab/ensemble.hpp"
#include "crimelab/forest.hpp"
#include "crimelab/knn.hpp"
#include "crimelab/lda.hpp"
#include "crimelab/tree.hpp"

namespace crimelab {

namespace {

using namespace binio;

constexpr char kMagic[4] = {'C', 'L', 'M', 'D'};
constexpr uint32_t kVersion = 1;

enum class Tag : uint8_t {
    decision_tree = 1,
    forest = 2,
    knn = 3,
    lda = 4,
    adaboost = 5,
    hard_vote = 6,
    soft_vote = 7,
    bagged = 8,
};

void write_doubles(std::ostream& out, const std::vector<double>& v) {
    put_u64(out, v.size());
    for (double x : v) put_f64(out, x);
}

std::vector<double> read_doubles(std::istream& in) {
    const uint64_t n = get_u64(in);
    std::vector<double> v(n);
    for (uint64_t i = 0; i < n; ++i) v[i] = get_f64(in);
    return v;
}

void write_matrix(std::ostream& out, const Matrix& m) {
    put_u64(out, m.rows);
    put_u64(out, m.cols);
    for (double x : m.data) put_f64(out, x);
}

Matrix read_matrix(std::istream& in) {
    const uint64_t rows = get_u64(in);
    const uint64_t cols = get_u64(in);
    Matrix m(rows, cols);
    for (double& x : m.data) x = get_f64(in);
    return m;
}

void write_tree(std::ostream& out, const Tree& tree) {
    put_u64(out, tree.nodes.size());
    for (const TreeNode& node : tree.nodes) {
        put_i32(out, node.feature);
        put_f64(out, node.threshold);
        put_i32(out, node.left);
        put_i32(out, node.right);
        put_i32(out, node.majority);
        write_doubles(out, node.proba);
    }
}

Tree read_tree(std::istream& in) {
    Tree tree;
    const uint64_t n = get_u64(in);
    tree.nodes.resize(n);
    for (uint64_t i = 0; i < n; ++i) {
        TreeNode& node = tree.nodes[i];
        node.feature = get_i32(in);
        node.threshold = get_f64(in);
        node.left = get_i32(in);
        node.right = get_i32(in);
        node.majority = get_i32(in);
        node.proba = read_doubles(in);
    }
    return tree;
}

void write_model(std::ostream& out, const Classifier& model);

void write_body(std::ostream& out, const Classifier& model) {
    if (auto* dt = dynamic_cast<const DecisionTreeModel*>(&model)) {
        out.put(static_cast<char>(Tag::decision_tree));
        put_str(out, dt->kind());
        put_u32(out, static_cast<uint32_t>(dt->n_classes()));
        put_u64(out, dt->n_features());
        write_tree(out, dt->tree());
        return;
    }
    if (auto* forest = dynamic_cast<const ForestModel*>(&model)) {
        out.put(static_cast<char>(Tag::forest));
        put_str(out, forest->kind());
        put_u32(out, static_cast<uint32_t>(forest->n_classes()));
        put_u64(out, forest->n_features());
        put_u64(out, forest->trees().size());
        for (const Tree& tree : forest->trees()) write_tree(out, tree);
        put_f64(out, forest->oob_score());
        return;
    }
    if (auto* knn = dynamic_cast<const KnnModel*>(&model)) {
        out.put(static_cast<char>(Tag::knn));
        put_str(out, knn->kind());
        put_u32(out, static_cast<uint32_t>(knn->n_classes()));
        put_u64(out, knn->n_features());
        put_u32(out, static_cast<uint32_t>(knn->k()));
        write_matrix(out, knn->train_x());
        put_u64(out, knn->train_y().size());
        for (int label : knn->train_y()) put_i32(out, label);
        return;
    }
    if (auto* lda = dynamic_cast<const LdaModel*>(&model)) {
        out.put(static_cast<char>(Tag::lda));
        put_str(out, lda->kind());
        put_u32(out, static_cast<uint32_t>(lda->n_classes()));
        put_u64(out, lda->n_features());
        write_doubles(out, lda->feature_mean());
        write_matrix(out, lda->projection());
        write_matrix(out, lda->class_means_proj());
        write_doubles(out, lda->class_bias());
        put_u64(out, lda->present().size());
        for (char p : lda->present()) out.put(p);
        return;
    }
    if (auto* ada = dynamic_cast<const AdaBoostModel*>(&model)) {
        out.put(static_cast<char>(Tag::adaboost));
        put_str(out, ada->kind());
        put_u32(out, static_cast<uint32_t>(ada->n_classes()));
        put_u64(out, ada->n_features());
        put_u64(out, ada->stumps().size());
        for (const Tree& stump : ada->stumps()) write_tree(out, stump);
        write_doubles(out, ada->alphas());
        write_doubles(out, ada->staged_train_error());
        write_doubles(out, ada->prior());
        out.put(ada->degenerate() ? 1 : 0);
        return;
    }
    if (auto* hard = dynamic_cast<const HardVoteEnsemble*>(&model)) {
        out.put(static_cast<char>(Tag::hard_vote));
        put_str(out, hard->kind());
        put_u32(out, static_cast<uint32_t>(hard->n_classes()));
        put_u64(out, hard->n_features());
        put_u32(out, static_cast<uint32_t>(hard->bases().size()));
        for (const auto& base : hard->bases()) write_model(out, *base);
        return;
    }
    if (auto* soft = dynamic_cast<const WeightedSoftVoteEnsemble*>(&model)) {
        out.put(static_cast<char>(Tag::soft_vote));
        put_str(out, soft->kind());
        put_u32(out, static_cast<uint32_t>(soft->n_classes()));
        put_u64(out, soft->n_features());
        write_doubles(out, soft->weights());
        put_u32(out, static_cast<uint32_t>(soft->bases().size()));
        for (const auto& base : soft->bases()) write_model(out, *base);
        return;
    }
    if (auto* bagged = dynamic_cast<const BaggedModel*>(&model)) {
        out.put(static_cast<char>(Tag::bagged));
        put_str(out, bagged->kind());
        put_u32(out, static_cast<uint32_t>(bagged->n_classes()));
        put_u64(out, bagged->n_features());
        put_u32(out, static_cast<uint32_t>(bagged->members().size()));
        for (const BagMember& member : bagged->members()) {
            put_u64(out, member.features.size());
            for (size_t f : member.features) put_u64(out, f);
            write_model(out, *member.model);
        }
        return;
    }
    throw DataError("unserializable model kind: " + model.kind());
}

void write_model(std::ostream& out, const Classifier& model) { write_body(out, model); }

std::unique_ptr<Classifier> read_model(std::istream& in) {
    const int tag_byte = in.get();
    if (tag_byte < 0) throw DataError("truncated file");
    const Tag tag = static_cast<Tag>(tag_byte);
    std::string kind = get_str(in);
    const int n_classes = static_cast<int>(get_u32(in));
    const size_t n_features = static_cast<size_t>(get_u64(in));

    switch (tag) {
        case Tag::decision_tree: {
            Tree tree = read_tree(in);
            return std::make_unique<DecisionTreeModel>(std::move(tree), n_classes, n_features);
        }
        case Tag::forest: {
            const uint64_t n_trees = get_u64(in);
            std::vector<Tree> trees(n_trees);
            for (uint64_t i = 0; i < n_trees; ++i) trees[i] = read_tree(in);
            const double oob = get_f64(in);
            return std::make_unique<ForestModel>(kind, std::move(trees), n_classes,
                                                 n_features, oob);
        }
        case Tag::knn: {
            const int k = static_cast<int>(get_u32(in));
            Matrix train_x = read_matrix(in);
            const uint64_t n = get_u64(in);
            std::vector<int> train_y(n);
            for (uint64_t i = 0; i < n; ++i) train_y[i] = get_i32(in);
            return std::make_unique<KnnModel>(std::move(train_x), std::move(train_y), k,
                                              n_classes);
        }
        case Tag::lda: {
            std::vector<double> mean = read_doubles(in);
            Matrix projection = read_matrix(in);
            Matrix class_means = read_matrix(in);
            std::vector<double> bias = read_doubles(in);
            const uint64_t n_present = get_u64(in);
            std::vector<char> present(n_present);
            for (uint64_t i = 0; i < n_present; ++i) {
                const int b = in.get();
                if (b < 0) throw DataError("truncated file");
                present[i] = static_cast<char>(b);
            }
            return std::make_unique<LdaModel>(std::move(mean), std::move(projection),
                                              std::move(class_means), std::move(bias),
                                              std::move(present), n_classes);
        }
        case Tag::adaboost: {
            const uint64_t n_stumps = get_u64(in);
            std::vector<Tree> stumps(n_stumps);
            for (uint64_t i = 0; i < n_stumps; ++i) stumps[i] = read_tree(in);
            std::vector<double> alphas = read_doubles(in);
            std::vector<double> staged = read_doubles(in);
            std::vector<double> prior = read_doubles(in);
            const int degenerate = in.get();
            if (degenerate < 0) throw DataError("truncated file");
            return std::make_unique<AdaBoostModel>(std::move(stumps), std::move(alphas),
                                                   std::move(staged), std::move(prior),
                                                   degenerate != 0, n_classes, n_features);
        }
        case Tag::hard_vote: {
            const uint32_t n_bases = get_u32(in);
            std::vector<std::unique_ptr<Classifier>> bases;
            bases.reserve(n_bases);
            for (uint32_t i = 0; i < n_bases; ++i) bases.push_back(read_model(in));
            return std::make_unique<HardVoteEnsemble>(kind, std::move(bases), n_classes,
                                                      n_features);
        }
        case Tag::soft_vote: {
            std::vector<double> weights = read_doubles(in);
            const uint32_t n_bases = get_u32(in);
            std::vector<std::unique_ptr<Classifier>> bases;
            bases.reserve(n_bases);
            for (uint32_t i = 0; i < n_bases; ++i) bases.push_back(read_model(in));
            return std::make_unique<WeightedSoftVoteEnsemble>(kind, std::move(bases),
                                                              std::move(weights), n_classes,
                                                              n_features);
        }
        case Tag::bagged: {
            const uint32_t n_members = get_u32(in);
            std::vector<BagMember> members;
            members.reserve(n_members);
            for (uint32_t i = 0; i < n_members; ++i) {
                BagMember member;
                const uint64_t n_feat = get_u64(in);
                member.features.resize(n_feat);
                for (uint64_t f = 0; f < n_feat; ++f) {
                    member.features[f] = static_cast<size_t>(get_u64(in));
                }
                member.model = read_model(in);
                members.push_back(std::move(member));
            }
            return std::make_unique<BaggedModel>(kind, std::move(members), n_classes,
                                                 n_features);
        }
    }
    throw DataError("unknown model tag " + std::to_string(tag_byte));
}

}  // namespace

void save_model(const Classifier& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    write_model(out, model);
    if (!out) throw DataError("write failed for " + path);
}

std::unique_ptr<Classifier> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError(path + " is not a model file");
    }
    const uint32_t version = get_u32(in);
    if (version != kVersion) {
        throw DataError("unsupported model version " + std::to_string(version));
    }
    return read_model(in);
}

nlohmann::json model_summary_json(const Classifier& model) {
    nlohmann::json j;
    j["kind"] = model.kind();
    j["n_classes"] = model.n_classes();
    j["n_features"] = model.n_features();

    if (auto* dt = dynamic_cast<const DecisionTreeModel*>(&model)) {
        j["n_nodes"] = dt->tree().nodes.size();
        j["n_leaves"] = dt->tree().n_leaves();
        j["depth"] = dt->tree().max_depth();
    } else if (auto* forest = dynamic_cast<const ForestModel*>(&model)) {
        j["n_trees"] = forest->trees().size();
        size_t nodes = 0;
        int depth = -1;
        for (const Tree& tree : forest->trees()) {
            nodes += tree.nodes.size();
            depth = std::max(depth, tree.max_depth());
        }
        j["total_nodes"] = nodes;
        j["max_tree_depth"] = depth;
        if (forest->oob_score() >= 0.0) j["oob_score"] = forest->oob_score();
    } else if (auto* knn = dynamic_cast<const KnnModel*>(&model)) {
        j["k"] = knn->k();
        j["stored_rows"] = knn->train_x().rows;
    } else if (auto* lda = dynamic_cast<const LdaModel*>(&model)) {
        j["rank"] = lda->rank();
        size_t present = 0;
        for (char p : lda->present()) present += p != 0;
        j["classes_present"] = present;
    } else if (auto* ada = dynamic_cast<const AdaBoostModel*>(&model)) {
        j["n_stumps"] = ada->stumps().size();
        j["degenerate"] = ada->degenerate();
        if (!ada->staged_train_error().empty()) {
            j["final_train_error"] = ada->staged_train_error().back();
        }
    } else if (auto* hard = dynamic_cast<const HardVoteEnsemble*>(&model)) {
        nlohmann::json bases = nlohmann::json::array();
        for (const auto& base : hard->bases()) bases.push_back(model_summary_json(*base));
        j["vote"] = "hard";
        j["bases"] = std::move(bases);
    } else if (auto* soft = dynamic_cast<const WeightedSoftVoteEnsemble*>(&model)) {
        nlohmann::json bases = nlohmann::json::array();
        for (const auto& base : soft->bases()) bases.push_back(model_summary_json(*base));
        j["vote"] = "soft";
        j["weights"] = soft->weights();
        j["bases"] = std::move(bases);
    } else if (auto* bagged = dynamic_cast<const BaggedModel*>(&model)) {
        j["n_bags"] = bagged->members().size();
        nlohmann::json members = nlohmann::json::array();
        for (const BagMember& member : bagged->members()) {
            nlohmann::json m = model_summary_json(*member.model);
            m["n_features_used"] = member.features.size();
            members.push_back(std::move(m));
        }
        j["members"] = std::move(members);
    }
    return j;
}

}  // namespace crimelab
