#pragma once

#include "qcluster/errors.hpp"
#include "qcluster/label.hpp"
#include "qcluster/scalar.hpp"
#include "qcluster/torus.hpp"
#include "qcluster/seed.hpp"
#include "qcluster/morphism.hpp"
#include "qcluster/structure.hpp"
#include "qcluster/qmatrix.hpp"
#include "qcluster/grassmannian.hpp"
#include "qcluster/io.hpp"
