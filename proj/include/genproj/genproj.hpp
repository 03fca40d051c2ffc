#pragma once

#include "genproj/certificate.hpp"
#include "genproj/errors.hpp"
#include "genproj/linalg.hpp"
#include "genproj/matrix.hpp"
#include "genproj/newton.hpp"
#include "genproj/parse.hpp"
#include "genproj/poly.hpp"
#include "genproj/projection.hpp"
#include "genproj/random.hpp"
#include "genproj/scalar.hpp"
#include "genproj/tangent.hpp"
#include "genproj/variety.hpp"
