#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "vortex/domain.hpp"
#include "vortex/errors.hpp"

using namespace vortex;

namespace {

GridMask disk_mask(int n, double radius_cells) {
  GridMask m;
  m.nx = m.ny = n;
  m.h = 1.0 / n;
  m.inside.assign(static_cast<std::size_t>(n) * n, 0);
  const double c = 0.5 * n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = i + 0.5 - c, y = j + 0.5 - c;
      m.inside[static_cast<std::size_t>(j) * n + i] = x * x + y * y < radius_cells * radius_cells;
    }
  return m;
}

}  // namespace

TEST(Shapes, Names) {
  EXPECT_STREQ(shape_name(Disk{}), "disk");
  EXPECT_STREQ(shape_name(Rectangle{}), "rectangle");
  EXPECT_STREQ(shape_name(GridMask{}), "mask");
  EXPECT_STREQ(shape_name(Polygon{}), "polygon");
}

TEST(Shapes, ValidationRejectsDegenerateInput) {
  EXPECT_THROW(validate_domain(Disk{0.0}), ValidationError);
  EXPECT_THROW(validate_domain(Disk{-1.0}), ValidationError);
  EXPECT_THROW(validate_domain(Rectangle{1.0, 0.0}), ValidationError);
  EXPECT_THROW(validate_domain(Polygon{{{0, 0}, {1, 0}}}), ValidationError);
  EXPECT_THROW(validate_domain(Polygon{{{0, 0}, {1, 0}, {2, 0}}}), ValidationError);
  EXPECT_THROW(validate_domain(parse_mask("000\n000\n", 0.1)), ValidationError);
}

TEST(Shapes, DiameterAdvisory) {
  EXPECT_TRUE(validate_domain(Disk{1.0}, 1.0).empty());
  EXPECT_EQ(validate_domain(Disk{1.2}, 1.0).size(), 1u);
  EXPECT_TRUE(validate_domain(Rectangle{2.0, 1.0}, 1.0).empty());
}

TEST(Shapes, Extent) {
  EXPECT_EQ(domain_extent(Disk{0.5}), Eigen::Vector2d(1.0, 1.0));
  EXPECT_EQ(domain_extent(Rectangle{2.0, 1.0}), Eigen::Vector2d(2.0, 1.0));
}

TEST(Mask, Parse) {
  const auto m = parse_mask("0110\n\n1111\n0100\n", 0.25);
  EXPECT_EQ(m.nx, 4);
  EXPECT_EQ(m.ny, 3);
  EXPECT_TRUE(m.at(1, 0));
  EXPECT_FALSE(m.at(0, 0));
  EXPECT_TRUE(m.at(1, 2));
  EXPECT_FALSE(m.at(3, 2));
}

TEST(Mask, ParseErrorsNameTheLine) {
  try {
    parse_mask("0110\n01x0\n", 0.1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  try {
    parse_mask("0110\n0110\n011\n", 0.1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_mask("", 0.1), ValidationError);
  EXPECT_THROW(parse_mask("11\n", 0.0), ValidationError);
  EXPECT_THROW(load_mask("/nonexistent/mask.txt", 0.1), ValidationError);
}

TEST(Mask, LoadFromFile) {
  const std::string path = ::testing::TempDir() + "mask_load.txt";
  std::ofstream(path) << "111\n101\n111\n";
  const auto m = load_mask(path, 0.5);
  EXPECT_EQ(m.nx, 3);
  EXPECT_FALSE(m.at(1, 1));
  EXPECT_NO_THROW(validate_domain(m));
}

TEST(Mask, DisjointBlobsAreRejected) {
  const auto m = parse_mask("1100011\n1100011\n0000000\n", 0.1);
  EXPECT_THROW(validate_domain(m), ConnectivityError);
  EXPECT_THROW(rasterize(m, 0.1), ConnectivityError);
  // diagonal contact is not a connection
  EXPECT_THROW(validate_domain(parse_mask("10\n01\n", 0.1)), ConnectivityError);
}

TEST(Raster, DiskCountsAndConnectivity) {
  const double h = 1.0 / 64;
  const auto r = rasterize(Disk{1.0}, h);
  EXPECT_EQ(component_count(r), 1);
  EXPECT_NEAR(r.unknowns * h * h, 3.141592653589793, 0.05);
  int n = 0;
  for (std::size_t i = 0; i < r.index.size(); ++i)
    if (r.index[i] >= 0) {
      ++n;
      EXPECT_GE(r.diag[i], 4.0);
      EXPECT_EQ(r.weight[i], 1.0);
    } else {
      EXPECT_EQ(r.diag[i], 0.0);
    }
  EXPECT_EQ(n, r.unknowns);
}

TEST(Raster, MaskFacesUseHalfCell) {
  const auto r = rasterize(parse_mask("1\n", 0.5), 0.5);
  ASSERT_EQ(r.unknowns, 1);
  for (std::size_t i = 0; i < r.index.size(); ++i)
    if (r.index[i] >= 0) {
      EXPECT_EQ(r.diag[i], 8.0);
    }
}

TEST(Raster, MaskRefinementMustBeInteger) {
  const auto m = parse_mask("111\n111\n", 0.3);
  EXPECT_NO_THROW(rasterize(m, 0.1));
  EXPECT_THROW(rasterize(m, 0.12), ValidationError);
  EXPECT_EQ(rasterize(m, 0.1).unknowns, 54);
}

TEST(Raster, NestedMasksAreNested) {
  const auto small = disk_mask(64, 20), big = disk_mask(64, 28);
  for (std::size_t i = 0; i < small.inside.size(); ++i)
    if (small.inside[i]) {
      EXPECT_TRUE(big.inside[i]);
    }
  EXPECT_LT(rasterize(small, small.h).unknowns, rasterize(big, big.h).unknowns);
}
