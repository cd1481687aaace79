#include "dampchain/structure.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <sstream>

namespace dampchain {

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::Regular: return "regular";
        case Regime::Singular: return "singular";
        case Regime::Unsupported: return "unsupported";
    }
    return "unknown";
}

bool ClosedClass::contains(std::size_t s) const {
    return std::binary_search(states.begin(), states.end(), s);
}

std::optional<std::size_t> ChainStructure::class_of(std::size_t state) const {
    for (std::size_t j = 0; j < classes.size(); ++j) {
        if (classes[j].contains(state)) return j;
    }
    return std::nullopt;
}

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency adjacency(const StochasticMatrix& p) {
    const std::size_t m = p.dim();
    Adjacency adj(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (p(i, j) > 0.0) adj[i].push_back(j);
        }
    }
    return adj;
}

// Iterative Tarjan. Returns component id per vertex.
std::vector<int> strongly_connected(const Adjacency& adj, int& count) {
    const std::size_t n = adj.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    int next = 0;
    count = 0;
    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    std::vector<Frame> call;
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        index[root] = low[root] = next++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < adj[f.v].size()) {
                const std::size_t w = adj[f.v][f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = next++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
        }
    }
    return comp;
}

int class_period(const Adjacency& adj, const std::vector<std::size_t>& states) {
    const std::size_t n = adj.size();
    std::vector<long> level(n, -1);
    std::queue<std::size_t> q;
    level[states.front()] = 0;
    q.push(states.front());
    long g = 0;
    while (!q.empty()) {
        const std::size_t u = q.front();
        q.pop();
        for (std::size_t v : adj[u]) {
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                q.push(v);
            } else {
                g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
            }
        }
    }
    return g == 0 ? 1 : static_cast<int>(g);
}

}  // namespace

ChainStructure decompose(const StochasticMatrix& p0) {
    const std::size_t m = p0.dim();
    const Adjacency adj = adjacency(p0);
    int ncomp = 0;
    const std::vector<int> comp = strongly_connected(adj, ncomp);

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(ncomp));
    std::vector<bool> closed(static_cast<std::size_t>(ncomp), true);
    for (std::size_t v = 0; v < m; ++v) {
        members[static_cast<std::size_t>(comp[v])].push_back(v);
        for (std::size_t w : adj[v]) {
            if (comp[w] != comp[v]) closed[static_cast<std::size_t>(comp[v])] = false;
        }
    }

    ChainStructure s;
    s.dim = m;
    for (std::size_t c = 0; c < members.size(); ++c) {
        if (closed[c]) {
            ClosedClass cls;
            cls.states = members[c];
            cls.period = class_period(adj, cls.states);
            s.classes.push_back(std::move(cls));
        } else {
            s.transient_states.insert(s.transient_states.end(), members[c].begin(),
                                      members[c].end());
        }
    }
    std::sort(s.classes.begin(), s.classes.end(),
              [](const ClosedClass& a, const ClosedClass& b) { return a.states[0] < b.states[0]; });
    std::sort(s.transient_states.begin(), s.transient_states.end());

    const bool all_aperiodic = std::all_of(s.classes.begin(), s.classes.end(),
                                           [](const ClosedClass& c) { return c.aperiodic(); });
    std::ostringstream diag;
    if (!s.transient_states.empty()) {
        s.regime = Regime::Unsupported;
        diag << s.transient_states.size() << " transient state(s); analysis requires none";
    } else if (!all_aperiodic) {
        s.regime = Regime::Unsupported;
        diag << "periodic closed class detected";
        for (const auto& c : s.classes) {
            if (!c.aperiodic()) {
                diag << " (class starting at state " << c.states[0] + 1 << " has period "
                     << c.period << ")";
                break;
            }
        }
    } else if (s.classes.size() == 1) {
        s.regime = Regime::Regular;
        diag << "single aperiodic closed class";
    } else {
        s.regime = Regime::Singular;
        diag << s.classes.size() << " aperiodic closed classes";
    }
    s.diagnostic = diag.str();
    return s;
}

std::vector<double> class_mass(const Eigen::VectorXd& p, const ChainStructure& s) {
    require_same_dim(static_cast<std::size_t>(p.size()), s.dim, "class mass");
    if (s.regime == Regime::Unsupported) {
        double transient = 0.0;
        for (std::size_t t : s.transient_states) transient += p(static_cast<Eigen::Index>(t));
        if (transient > 0.0) {
            throw Error(ErrorCode::RegimeMismatch,
                        "class mass: distribution charges transient states");
        }
    }
    std::vector<double> f;
    f.reserve(s.classes.size());
    for (const auto& c : s.classes) {
        double sum = 0.0;
        for (std::size_t k : c.states) sum += p(static_cast<Eigen::Index>(k));
        f.push_back(sum);
    }
    return f;
}

std::vector<double> class_mass(const Distribution& p, const ChainStructure& s) {
    return class_mass(p.values(), s);
}

Eigen::VectorXd gather(const Eigen::VectorXd& v, const ClosedClass& cls) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(cls.states.size()));
    for (std::size_t a = 0; a < cls.states.size(); ++a) {
        out(static_cast<Eigen::Index>(a)) = v(static_cast<Eigen::Index>(cls.states[a]));
    }
    return out;
}

StochasticMatrix restrict_matrix(const StochasticMatrix& p0, const ClosedClass& cls) {
    const auto k = static_cast<Eigen::Index>(cls.states.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            sub(a, b) = p0(cls.states[static_cast<std::size_t>(a)],
                           cls.states[static_cast<std::size_t>(b)]);
        }
    }
    const double leak = (sub.rowwise().sum().array() - 1.0).abs().maxCoeff();
    if (leak > kDefaultRowTol) {
        throw Error(ErrorCode::InvalidInput, "restrict: class is not closed");
    }
    return StochasticMatrix(std::move(sub));
}

DampingVector restrict_damping(const DampingVector& d, const ClosedClass& cls) {
    Eigen::VectorXd sub = gather(d.values(), cls);
    sub /= sub.sum();
    return DampingVector(std::move(sub));
}

std::optional<Distribution> restrict_distribution(const Distribution& p, const ClosedClass& cls) {
    Eigen::VectorXd sub = gather(p.values(), cls);
    const double f = sub.sum();
    if (!(f > 0.0)) return std::nullopt;
    sub /= f;
    return Distribution::trusted(std::move(sub));
}

}  // namespace dampchain
