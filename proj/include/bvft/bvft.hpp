#ifndef BVFT_BVFT_HPP
#define BVFT_BVFT_HPP

// Umbrella header: the whole library.

#include "accel.hpp"
#include "acceptance.hpp"
#include "catalog.hpp"
#include "distrib.hpp"
#include "errors.hpp"
#include "expr.hpp"
#include "func_model.hpp"
#include "inversion.hpp"
#include "oscillatory.hpp"
#include "parser.hpp"
#include "properties.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "stieltjes.hpp"

#endif // BVFT_BVFT_HPP
