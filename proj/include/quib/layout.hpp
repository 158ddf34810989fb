#pragma once

// Ordered register layout with row-major flat indexing: for registers
// (A, B, R) the amplitude index is (a * dim_B + b) * dim_R + r.

#include <string>
#include <vector>

#include "quib/errors.hpp"

namespace quib {

struct Register {
    std::string name;
    int dim = 0;
};

class RegisterLayout {
  public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> regs);

    int size() const { return static_cast<int>(regs_.size()); }
    long total_dim() const { return total_; }
    const std::vector<Register>& registers() const { return regs_; }
    const Register& at(int pos) const { return regs_[pos]; }

    bool has(const std::string& name) const;
    int position(const std::string& name) const;  // throws DimensionError if absent
    int dim_of(const std::string& name) const;
    long stride(int pos) const { return strides_[pos]; }

    long flat(const std::vector<int>& digits) const;
    std::vector<int> digits(long flat_index) const;

    bool operator==(const RegisterLayout& other) const;
    bool same_dims(const RegisterLayout& other) const;

  private:
    std::vector<Register> regs_;
    std::vector<long> strides_;
    long total_ = 1;
};

// Concatenation for tensor products; throws on register-name collision.
RegisterLayout concat(const RegisterLayout& a, const RegisterLayout& b);

bool is_power_of_two(long n);
int log2_exact(long n);  // throws DimensionError when n is not a power of two

}  // namespace quib
