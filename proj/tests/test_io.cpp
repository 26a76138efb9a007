// Copyright (c) ellres contributors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "ellres/io.hpp"

using namespace ellres;

namespace {

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Io, ModelRoundTrip) {
    const auto p2 = projective_space_model(2);
    const auto back = parse_model(model_to_json(p2).dump());
    ASSERT_EQ(back.points.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(back.points[i].tangent_weights, p2.points[i].tangent_weights);
}

TEST(Io, ModelDiagnosticsCarryFieldPaths) {
    EXPECT_NE(error_of([] { parse_model(R"({"points": []})"); }).find("lattice_rank"), std::string::npos);
    EXPECT_NE(error_of([] { parse_model(R"({"lattice_rank": 2, "points": [{"tangent_weights": [{"t": [1]}]}]})"); })
                  .find("points[0].tangent_weights[0].t"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse_model(R"({"lattice_rank": 1, "points": [{"tangent_weights": [{"t": [0]}]}]})"); })
                  .find("trivial"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse_model(R"({"lattice_rank": 1, "points": [{"tangent_weights": [{"t": [1.5]}]}]})"); })
                  .find("integer"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse_model("{\n\"lattice_rank\": 1,\n oops }"); }).find("line 3"), std::string::npos);
}

TEST(Io, ConfigParsing) {
    const auto in = parse_config(R"({"n": 2, "a_roots": [{"re": 1.1, "im": 0.2}, {"abs": 1.2, "arg": 0.5, "sign": -1}],
                                     "b_roots": [{"re": -1.3, "im": 0}]})");
    EXPECT_EQ(in.n, 2);
    ASSERT_EQ(in.cfg.a_roots.size(), 2u);
    EXPECT_EQ(in.cfg.a_roots[1].sign, -1);
    EXPECT_NEAR(std::abs(in.cfg.a_roots[1].value - std::polar(1.2, 0.5)), 0.0, 1e-15);
    EXPECT_EQ(in.cfg.b_roots[0].value, cplx(-1.3, 0.0));
    EXPECT_THROW(parse_config(R"({"a_roots": [{"re": 1.1}]})"), ParseError);
    EXPECT_THROW(parse_config(R"({"a_roots": [{"re": 1.1, "im": 0, "sign": 2}]})"), ParseError);
    EXPECT_THROW(parse_config(R"({"n": 1})"), ParseError);
}

TEST(Io, YGrammar) {
    EXPECT_EQ(parse_y("0.3+0.1i").value, cplx(0.3, 0.1));
    EXPECT_EQ(parse_y("-1").value, cplx(-1.0, 0.0));
    EXPECT_EQ(parse_y("2-i").value, cplx(2.0, -1.0));
    EXPECT_EQ(parse_y("-0.5i").value, cplx(0.0, -0.5));
    EXPECT_EQ(parse_y("1e-1+2e0i").value, cplx(0.1, 2.0));
    const auto z = parse_y("zeta:3:2");
    EXPECT_EQ(z.root_n, 3);
    EXPECT_EQ(z.root_k, 2);
    EXPECT_EQ(z.value, root_of_unity(3, 2));
    EXPECT_EQ(parse_y("random", 5).value, parse_y("random", 5).value);
    EXPECT_NE(parse_y("random", 5).value, parse_y("random", 6).value);
    EXPECT_THROW(parse_y("zeta:1:0"), ParseError);
    EXPECT_THROW(parse_y("zeta:4:8"), ParseError);
    EXPECT_THROW(parse_y("abc"), ParseError);
    EXPECT_THROW(parse_y(""), ParseError);
}
