#include "lbm/layout.hpp"

namespace lbm {

LayoutParams LayoutParams::make(std::size_t alpha, std::size_t beta, std::size_t n_nodes) {
    if (alpha < 1 || beta < 1) throw ConfigError("layout: alpha and beta must be >= 1");
    LayoutParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.n_nodes = n_nodes;
    p.padded_nodes = (n_nodes + alpha - 1) / alpha * alpha;
    if (p.padded_nodes == 0) p.padded_nodes = alpha;
    p.alpha_pow2 = (alpha & (alpha - 1)) == 0;
    if (p.alpha_pow2) {
        p.alpha_mask = alpha - 1;
        unsigned s = 0;
        while ((std::size_t{1} << s) < alpha) ++s;
        p.alpha_shift = s;
    }
    return p;
}

FieldStore convert_layout(const FieldStore& src, const LayoutParams& dst_params) {
    if (!src.layout().same_shape(dst_params))
        throw ConfigError("convert_layout: mismatched node count or vector width");
    FieldStore dst(dst_params);
    const std::size_t n = src.n_nodes();
    const std::size_t b = src.beta();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < b; ++i)
            dst.set(k, i, src.get(k, i));
    return dst;
}

}  // namespace lbm
