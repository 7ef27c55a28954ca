#pragma once

#include "specmix/cli.hpp"
#include "specmix/combinatorics.hpp"
#include "specmix/complexes.hpp"
#include "specmix/enumeration.hpp"
#include "specmix/hypergraph_mixing.hpp"
#include "specmix/io.hpp"
#include "specmix/lemma_lab.hpp"
#include "specmix/report.hpp"
#include "specmix/rng.hpp"
#include "specmix/simplicial_mixing.hpp"
#include "specmix/simplicial_ops.hpp"
#include "specmix/tensor_forms.hpp"
