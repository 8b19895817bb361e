#pragma once

#include "phylotope/abelian.hpp"
#include "phylotope/errors.hpp"
#include "phylotope/hilbert.hpp"
#include "phylotope/io.hpp"
#include "phylotope/lattice.hpp"
#include "phylotope/model.hpp"
#include "phylotope/polyhedra.hpp"
#include "phylotope/simplex.hpp"
#include "phylotope/sumset.hpp"
#include "phylotope/tree.hpp"
