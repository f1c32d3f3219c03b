#pragma once

#include "kmerco/count_bloom_filter.hpp"
#include "kmerco/dna.hpp"
#include "kmerco/errors.hpp"
#include "kmerco/exact_counter.hpp"
#include "kmerco/filter_plan.hpp"
#include "kmerco/hash.hpp"
#include "kmerco/metrics.hpp"
#include "kmerco/pipeline.hpp"
#include "kmerco/primes.hpp"
#include "kmerco/sequence_io.hpp"
