// Shared plumbing: error types, deterministic RNG, seed mixing, small math helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hps {

struct InvalidInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DegenerateDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TrainingDivergence : std::runtime_error {
    int step;
    explicit TrainingDivergence(int step_index)
        : std::runtime_error("training diverged (non-finite loss) at step " + std::to_string(step_index)),
          step(step_index) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckpointMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// splitmix64; used to derive independent sub-seeds from one master seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic RNG. Wraps mt19937_64 with fixed uniform/normal mappings so
// sequences are identical across platforms and serializable for exact resume
// (std distributions are implementation-defined; these are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // inclusive range
    int uniform_int(int lo, int hi) {
        if (hi < lo) throw InvalidInput("uniform_int: empty range");
        const int span = hi - lo;
        int offset = static_cast<int>(uniform01() * (static_cast<double>(span) + 1.0));
        return lo + std::min(offset, span);
    }

    // Box-Muller with cached spare
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(uniform_int(0, i))]);
        }
    }

    void save(std::ostream& os) const {
        os << engine_ << ' ' << (have_spare_ ? 1 : 0) << ' ';
        const auto flags = os.flags();
        os << std::hexfloat << spare_;
        os.flags(flags);
    }

    void load(std::istream& is) {
        int spare_flag = 0;
        is >> engine_ >> spare_flag;
        std::string token;
        is >> token;
        spare_ = std::strtod(token.c_str(), nullptr);
        have_spare_ = spare_flag != 0;
        if (!is) throw CheckpointMismatch("corrupt rng state");
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

inline double median(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace hps
