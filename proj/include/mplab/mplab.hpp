#pragma once

#include "mplab/arith.hpp"
#include "mplab/bounds.hpp"
#include "mplab/error.hpp"
#include "mplab/factorial_abc.hpp"
#include "mplab/parallel.hpp"
#include "mplab/primes.hpp"
#include "mplab/records.hpp"
#include "mplab/repdigit.hpp"
#include "mplab/search.hpp"
