#pragma once

#include "ufo/algebra.hpp"
#include "ufo/component_embedding.hpp"
#include "ufo/factorization.hpp"
#include "ufo/free_words.hpp"
#include "ufo/nat_injection.hpp"
#include "ufo/text_format.hpp"
