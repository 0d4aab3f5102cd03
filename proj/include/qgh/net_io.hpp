#pragma once

#include <json.hpp>

#include "qgh/net.hpp"

namespace qgh {

/// Net as JSON. `blocks` holds one flat [re, im] entry list per point (all
/// blocks concatenated, row-major); `block_dims` are the dimensions of the
/// algebra the points live in, so the file is self-describing.
inline nlohmann::json net_to_json(const Net& net) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : net.points) {
        nlohmann::json flat = nlohmann::json::array();
        for (const auto& blk : p.blocks())
            for (int r = 0; r < blk.rows(); ++r)
                for (int c = 0; c < blk.cols(); ++c)
                    flat.push_back({blk(r, c).real(), blk(r, c).imag()});
        points.push_back(std::move(flat));
    }
    return nlohmann::json{
        {"target", to_string(net.target)},
        {"seed", net.seed},
        {"covering_estimate", net.covering_estimate},
        {"covering_method", net.covering_method == CoveringMethod::certified ? "certified" : "empirical"},
        {"block_dims", net.point_algebra->block_dims()},
        {"blocks", std::move(points)}};
}

/// Inverse of net_to_json for block-diagonal (identity-representation)
/// algebras; a 2x2 target rebuilds the amplification of the halved base.
inline Net net_from_json(const nlohmann::json& j) {
    Net net;
    net.target = net_target_from_string(j.at("target").get<std::string>());
    net.seed = j.at("seed").get<std::uint64_t>();
    net.covering_estimate = j.at("covering_estimate").get<double>();
    net.covering_method = j.at("covering_method").get<std::string>() == "certified"
                              ? CoveringMethod::certified
                              : CoveringMethod::empirical;
    std::vector<int> dims = j.at("block_dims").get<std::vector<int>>();
    if (net.target == NetTarget::positive_unit_ball_2x2) {
        std::vector<int> half;
        for (int d : dims) {
            if (d % 2 != 0) throw schema_error("2x2 net with odd block dimension");
            half.push_back(d / 2);
        }
        net.base = FiniteVNAlgebra::blocks(half);
        net.amplification = std::make_shared<Amplification>(net.base);
        net.point_algebra = net.amplification->algebra();
    } else {
        net.base = FiniteVNAlgebra::blocks(dims);
        net.point_algebra = net.base;
    }
    for (const auto& flat : j.at("blocks")) {
        std::vector<Mat> blocks;
        std::size_t idx = 0;
        for (int d : dims) {
            Mat m(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    const auto& pair = flat.at(idx++);
                    m(r, c) = cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
                }
            blocks.push_back(std::move(m));
        }
        if (idx != flat.size()) throw schema_error("net point has wrong entry count");
        net.points.emplace_back(net.point_algebra, std::move(blocks));
    }
    return net;
}

}  // namespace qgh
