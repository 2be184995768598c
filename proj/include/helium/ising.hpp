#pragma once

#include "helium/ising/chain.hpp"
#include "helium/ising/dense.hpp"
#include "helium/ising/disorder.hpp"
#include "helium/ising/evolve.hpp"
#include "helium/ising/fermion.hpp"
#include "helium/ising/susceptibility.hpp"
