#ifndef CHAINORDER_CHAINORDER_HPP
#define CHAINORDER_CHAINORDER_HPP

#include "bitset.hpp"
#include "clique.hpp"
#include "exact.hpp"
#include "face_lattice.hpp"
#include "io.hpp"
#include "normal_form.hpp"
#include "polytope.hpp"
#include "poset.hpp"

#endif  // CHAINORDER_CHAINORDER_HPP
