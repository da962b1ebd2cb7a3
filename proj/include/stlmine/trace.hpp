#pragma once

#include <string>
#include <vector>

#include "stlmine/util.hpp"

namespace stlmine {

// A uniformly sampled multivariate trajectory.  Sample j of variable v lives
// at values[v][j] and time t0 + j*dt.  label: +1 positive, -1 negative,
// 0 unlabeled.
struct Trace {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<std::string> variable_names;
    std::vector<std::vector<double>> values;
    int label = 0;

    int sample_count() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
    double time_at(int j) const { return t0 + j * dt; }
    double horizon() const { return dt * (sample_count() - 1); }

    int var_index(const std::string& name) const {
        for (size_t i = 0; i < variable_names.size(); ++i)
            if (variable_names[i] == name) return static_cast<int>(i);
        return -1;
    }

    void check() const {
        if (!(dt > 0.0)) throw Error("trace requires dt > 0");
        if (variable_names.empty()) throw Error("trace requires at least one variable");
        if (variable_names.size() != values.size())
            throw Error("trace variable_names/values size mismatch");
        if (sample_count() < 2) throw Error("trace requires at least 2 samples");
        for (const auto& row : values)
            if (static_cast<int>(row.size()) != sample_count())
                throw Error("trace rows have unequal lengths");
        for (size_t i = 0; i < variable_names.size(); ++i)
            for (size_t j = i + 1; j < variable_names.size(); ++j)
                if (variable_names[i] == variable_names[j])
                    throw Error("duplicate trace variable '" + variable_names[i] + "'");
    }
};

}  // namespace stlmine
