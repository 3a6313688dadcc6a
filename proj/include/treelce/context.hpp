#pragma once

#include "treelce/naming.hpp"
#include "treelce/primitives.hpp"
#include "treelce/tree.hpp"

namespace treelce {

/// One tree plus the shared lookup structures every LCE index builds on.
/// The tree must outlive the context.
struct TreeContext {
  const LabeledTree* tree = nullptr;
  PrimitivesIndex prim;
  NamingIndex naming;

  void build(const LabeledTree& t, const NamingConfig& naming_config = {}) {
    tree = &t;
    prim.build(t);
    naming.build(t, prim, naming_config);
  }
};

}  // namespace treelce
