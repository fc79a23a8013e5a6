#include "fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace roughvol::detail {

namespace {

// The FFTW planner is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p) {
        if (plan_ == nullptr) throw std::runtime_error("fftw: planner returned null");
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

bool is_smooth(std::size_t n) {
    for (std::size_t p : {2u, 3u, 5u, 7u}) {
        while (n % p == 0) n /= p;
    }
    return n == 1;
}

}  // namespace

std::size_t good_fft_size(std::size_t n) {
    if (n <= 1) return 1;
    while (!is_smooth(n)) ++n;
    return n;
}

void fft_forward(std::vector<std::complex<double>>& data) {
    if (data.empty()) return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    Plan plan(raw);
    plan.execute();
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<double> in(x.begin(), x.end());
    std::vector<std::complex<double>> out(n / 2 + 1);
    if (n == 0) return out;
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                   reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    Plan plan(raw);
    plan.execute();
    return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
    if (spectrum.size() != n / 2 + 1) throw std::invalid_argument("irfft: spectrum size mismatch");
    // c2r destroys its input.
    std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
    std::vector<double> out(n);
    if (n == 0) return out;
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                   out.data(), FFTW_ESTIMATE);
    }
    Plan plan(raw);
    plan.execute();
    return out;
}

}  // namespace roughvol::detail
