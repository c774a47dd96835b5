#include <gtest/gtest.h>

#include <cstdio>
#include <sstream>

#include "mgvar/errors.hpp"
#include "mgvar/io.hpp"

using namespace mgvar;

TEST(Io, FiltrationRoundTrip) {
  for (const auto& f : {Filtration::dyadic(4), random_filtration(4, 30, 2), comb_filtration(10, 0.05, 0.2, 3)}) {
    const auto back = filtration_from_json(filtration_to_json(f));
    EXPECT_EQ(back.levels(), f.levels());
    EXPECT_EQ(back.dyadic_layout(), f.dyadic_layout());
    EXPECT_TRUE(std::equal(back.cell_measure().begin(), back.cell_measure().end(), f.cell_measure().begin()));
  }
}

TEST(Io, MartingaleRoundTripIsExact) {
  auto filt = std::make_shared<const Filtration>(random_filtration(5, 40, 9));
  const auto f = random_martingale(filt, GeneratorSpec{}, 9);
  const auto j = martingale_to_json(f, "inline", json{{"seed", 9}});
  EXPECT_EQ(schema_of(j), "mgvar.martingale");
  const auto back = martingale_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.values(), f.values());
}

TEST(Io, WeightAndPathRoundTrip) {
  const auto w = cascade_weight(5, 0.3, 2);
  const auto back = weight_from_json(json::parse(weight_to_json(w, json::object()).dump()));
  EXPECT_TRUE(std::equal(back.density().begin(), back.density().end(), w.density().begin()));
  const std::vector<double> path{0, 1, 0, 1};
  EXPECT_EQ(path_from_json(path_to_json(path)), path);
}

TEST(Io, RejectsWrongSchemaAndVersion) {
  const auto p = path_to_json({1.0});
  EXPECT_THROW(martingale_from_json(p), ParameterError);
  auto bumped = p;
  bumped["version"] = kSchemaVersion + 1;
  EXPECT_THROW(path_from_json(bumped), ParameterError);
  auto broken = filtration_to_json(Filtration::dyadic(2));
  broken["dyadic"] = false;
  broken["cell_measure"] = {0.5, 0.5, 0.0, 0.0};
  EXPECT_THROW(filtration_from_json(broken), ParameterError);
  EXPECT_THROW(path_from_json(json{{"schema", "mgvar.path"}, {"version", kSchemaVersion}, {"values", "x"}}),
               ParameterError);
  EXPECT_EQ(schema_of(json::array()), "");
}

TEST(Io, Files) {
  const std::string name = ::testing::TempDir() + "mgvar_io_test.json";
  write_json_file(name, path_to_json({2.0, 3.0}));
  EXPECT_EQ(path_from_json(read_json_file(name)), (std::vector<double>{2.0, 3.0}));
  std::remove(name.c_str());
  EXPECT_THROW(read_json_file(name), ParameterError);
}

TEST(Io, CsvLayout) {
  std::ostringstream os;
  write_fields_csv(os, {"M", "S"}, {{1.0, 0.5}, {0.25, 2.0}});
  EXPECT_EQ(os.str(), "cell,M,S\n0,1,0.25\n1,0.5,2\n");
}
