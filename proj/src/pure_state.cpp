#include "rvb/pure_state.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rvb {

PureState::PureState(int n_sites, VecC amplitudes)
    : n_sites_(n_sites), amp_(std::move(amplitudes)) {
    if (n_sites < 1 || n_sites > 24)
        throw std::invalid_argument("PureState: n_sites out of range");
    if (amp_.size() != (Eigen::Index{1} << n_sites))
        throw std::invalid_argument("PureState: amplitude vector has wrong length");
}

PureState PureState::zero_state(int n_sites) {
    VecC v = VecC::Zero(Eigen::Index{1} << n_sites);
    v[0] = 1.0;
    return PureState(n_sites, std::move(v));
}

PureState& PureState::normalize() {
    const double n = amp_.norm();
    if (n < 1e-300)
        throw std::domain_error("PureState::normalize: zero vector");
    amp_ /= n;
    return *this;
}

bool PureState::is_normalized(double tol) const {
    return std::abs(amp_.squaredNorm() - 1.0) < tol;
}

Cx PureState::overlap(const PureState& other) const {
    if (other.dim() != dim())
        throw std::invalid_argument("PureState::overlap: dimension mismatch");
    return amp_.dot(other.amp_);   // conjugates *this
}

std::string PureState::to_json() const {
    nlohmann::json j;
    j["n_sites"] = n_sites_;
    auto& arr = j["amplitudes"] = nlohmann::json::array();
    for (Eigen::Index k = 0; k < amp_.size(); ++k)
        arr.push_back({amp_[k].real(), amp_[k].imag()});
    return j.dump();
}

PureState PureState::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    const int n = j.at("n_sites").get<int>();
    const auto& arr = j.at("amplitudes");
    VecC v(arr.size());
    Eigen::Index k = 0;
    for (const auto& e : arr)
        v[k++] = Cx(e.at(0).get<double>(), e.at(1).get<double>());
    return PureState(n, std::move(v));
}

PureState PureState::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open state file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

void PureState::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write state file: " + path);
    out << to_json() << "\n";
}

} // namespace rvb
