#include "torusflux/fft.hpp"

#include <fftw3.h>

#include <array>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace torusflux::fft {

namespace {

struct PlanKey {
    std::array<int, 3> shape;
    int rank;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (rank != o.rank) return rank < o.rank;
        if (sign != o.sign) return sign < o.sign;
        return shape < o.shape;
    }
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

// Plans are created once per shape with FFTW_UNALIGNED so they can execute on
// any caller buffer via the new-array interface.
fftw_plan get_plan(std::span<const int> shape, int sign) {
    PlanKey key{{0, 0, 0}, static_cast<int>(shape.size()), sign};
    for (std::size_t i = 0; i < shape.size(); ++i) key.shape[i] = shape[i];

    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;

    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    std::vector<cplx> a(total), b(total);
    fftw_plan p = fftw_plan_dft(
        key.rank, key.shape.data(),
        reinterpret_cast<fftw_complex*>(a.data()), reinterpret_cast<fftw_complex*>(b.data()),
        sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw std::runtime_error("fft: plan creation failed");
    plan_cache.emplace(key, p);
    return p;
}

void execute(std::span<const cplx> in, std::span<cplx> out, std::span<const int> shape,
             int sign) {
    std::size_t total = 1;
    for (int s : shape) total *= static_cast<std::size_t>(s);
    if (in.size() != total || out.size() != total)
        throw std::invalid_argument("fft: buffer size does not match shape");
    fftw_plan p = get_plan(shape, sign);
    if (in.data() == out.data()) {
        std::vector<cplx> tmp(in.begin(), in.end());
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    } else {
        // new-array execute never writes to in
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                         reinterpret_cast<fftw_complex*>(out.data()));
    }
}

} // namespace

void forward(std::span<const cplx> in, std::span<cplx> out, std::span<const int> shape) {
    execute(in, out, shape, FFTW_FORWARD);
}

void backward(std::span<const cplx> in, std::span<cplx> out, std::span<const int> shape) {
    execute(in, out, shape, FFTW_BACKWARD);
}

void forward(std::span<const cplx> in, std::span<cplx> out, int dim, int n) {
    std::vector<int> shape(static_cast<std::size_t>(dim), n);
    forward(in, out, shape);
}

void backward(std::span<const cplx> in, std::span<cplx> out, int dim, int n) {
    std::vector<int> shape(static_cast<std::size_t>(dim), n);
    backward(in, out, shape);
}

} // namespace torusflux::fft
