#pragma once

#include "pgt/abel.hpp"
#include "pgt/class_number.hpp"
#include "pgt/cubic_core.hpp"
#include "pgt/errors.hpp"
#include "pgt/number_field.hpp"
#include "pgt/order.hpp"
#include "pgt/report.hpp"
#include "pgt/theta.hpp"
#include "pgt/units.hpp"
#include "pgt/validate.hpp"
