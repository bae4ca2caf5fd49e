#include "magnoblock/expm.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace magnoblock {

namespace {

using Mat = GeneratorMatrix;

constexpr std::array<double, 4> kB3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kB5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kB7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                    25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kB9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                     30270240.0,    2162160.0,    110880.0,     3960.0,
                                     90.0,          1.0};
constexpr std::array<double, 14> kB13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

template <std::size_t N>
Mat pade_low(const Mat& a, const std::array<double, N>& b) {
    // degree m = N - 1, odd
    const Mat id = Mat::Identity();
    const Mat a2 = a * a;
    Mat even = b[0] * id;
    Mat odd = b[1] * id;
    Mat pow = id;
    for (std::size_t k = 2; k + 1 < N; k += 2) {
        pow = pow * a2;
        even += b[k] * pow;
        odd += b[k + 1] * pow;
    }
    const Mat u = a * odd;
    return (even - u).partialPivLu().solve(even + u);
}

Mat pade13(const Mat& a) {
    const auto& b = kB13;
    const Mat id = Mat::Identity();
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                       b[3] * a2 + b[1] * id);
    const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                  b[2] * a2 + b[0] * id;
    return (v - u).partialPivLu().solve(v + u);
}

} // namespace

GeneratorMatrix expm(const GeneratorMatrix& a) {
    if (!a.allFinite()) throw std::domain_error("expm: non-finite matrix entry");
    const double n = norm1(a);
    if (n <= kTheta3) return pade_low(a, kB3);
    if (n <= kTheta5) return pade_low(a, kB5);
    if (n <= kTheta7) return pade_low(a, kB7);
    if (n <= kTheta9) return pade_low(a, kB9);

    int s = std::max(0, static_cast<int>(std::ceil(std::log2(n / kTheta13))));
    Mat r = pade13(a * std::ldexp(1.0, -s));
    for (int k = 0; k < s; ++k) r = r * r;
    return r;
}

StateVector expm_propagate(const Generator& gen, const StateVector& initial, double t) {
    if (t < 0.0) throw std::domain_error("expm_propagate: negative time");
    if (t == 0.0) return initial;
    const GeneratorMatrix a = gen.entries * cplx{0.0, -t};
    return StateVector(expm(a) * initial.amplitudes());
}

} // namespace magnoblock
