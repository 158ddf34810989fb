#include "quib/layout.hpp"

#include <algorithm>
#include <set>

namespace quib {

RegisterLayout::RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    if (regs_.empty()) throw DimensionError("layout needs at least one register");
    std::set<std::string> seen;
    for (const auto& r : regs_) {
        if (r.dim < 1) throw DimensionError("register dimension must be >= 1: " + r.name);
        if (r.name.empty()) throw DimensionError("register name must be nonempty");
        if (!seen.insert(r.name).second)
            throw DimensionError("duplicate register name: " + r.name);
    }
    strides_.assign(regs_.size(), 1);
    for (int i = static_cast<int>(regs_.size()) - 2; i >= 0; --i)
        strides_[i] = strides_[i + 1] * regs_[i + 1].dim;
    total_ = strides_[0] * regs_[0].dim;
}

bool RegisterLayout::has(const std::string& name) const {
    return std::any_of(regs_.begin(), regs_.end(),
                       [&](const Register& r) { return r.name == name; });
}

int RegisterLayout::position(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
        if (regs_[i].name == name) return i;
    throw DimensionError("no register named " + name);
}

int RegisterLayout::dim_of(const std::string& name) const {
    return regs_[position(name)].dim;
}

long RegisterLayout::flat(const std::vector<int>& digits) const {
    if (static_cast<int>(digits.size()) != size())
        throw DimensionError("digit count does not match register count");
    long idx = 0;
    for (int i = 0; i < size(); ++i) {
        if (digits[i] < 0 || digits[i] >= regs_[i].dim)
            throw DimensionError("digit out of range for register " + regs_[i].name);
        idx += digits[i] * strides_[i];
    }
    return idx;
}

std::vector<int> RegisterLayout::digits(long flat_index) const {
    if (flat_index < 0 || flat_index >= total_)
        throw DimensionError("flat index out of range");
    std::vector<int> out(size());
    for (int i = 0; i < size(); ++i) {
        out[i] = static_cast<int>(flat_index / strides_[i]);
        flat_index %= strides_[i];
    }
    return out;
}

bool RegisterLayout::operator==(const RegisterLayout& other) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i)
        if (regs_[i].name != other.regs_[i].name || regs_[i].dim != other.regs_[i].dim)
            return false;
    return true;
}

bool RegisterLayout::same_dims(const RegisterLayout& other) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i)
        if (regs_[i].dim != other.regs_[i].dim) return false;
    return true;
}

RegisterLayout concat(const RegisterLayout& a, const RegisterLayout& b) {
    std::vector<Register> regs = a.registers();
    for (const auto& r : b.registers()) {
        if (a.has(r.name))
            throw DimensionError("register name collision in tensor product: " + r.name);
        regs.push_back(r);
    }
    return RegisterLayout(std::move(regs));
}

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(long n) {
    if (!is_power_of_two(n)) throw DimensionError("dimension is not a power of two");
    int k = 0;
    while ((1L << k) < n) ++k;
    return k;
}

}  // namespace quib
