#include "structpca/registry.hpp"

namespace structpca {

namespace {

Mat flow_mix_matrix() {
  Mat a(3, 5);
  a << 1, -1, 0, 0, 1,
       0, 1, -1, 0, 0,
       0, 0, 1, -1, -1;
  return a;
}

Mat cs1_matrix() {
  Mat a(3, 6);
  a << 1, 1, 0, 0, 0, 0,
       1, 2, 3, 0, 0, 0,
       3, 1, -1, 2, 0, 0;
  return a;
}

Mat cs3_matrix() {
  Mat a(4, 6);
  a << 3, 1, -1, 2, 0, -6,
       2, 1, -2, 1, 0, 0,
       1, 1, -1, 0, 0, 0,
       1, -3, 1, 1, 0, 0;
  return a;
}

CaseFixture make_case(const std::string& name, Mat a) {
  StructureMask mask = StructureMask::from_pattern(a);
  return CaseFixture{name, make_model(std::move(a), std::move(mask))};
}

}  // namespace

const std::vector<std::string>& registry_names() {
  static const std::vector<std::string> names{"flow-mix", "cs1", "cs3"};
  return names;
}

CaseFixture registry_lookup(const std::string& name) {
  if (name == "flow-mix") return make_case(name, flow_mix_matrix());
  if (name == "cs1") return make_case(name, cs1_matrix());
  if (name == "cs3") return make_case(name, cs3_matrix());
  raise(Errc::unknown_case, "no case named '" + name + "'");
}

}  // namespace structpca
