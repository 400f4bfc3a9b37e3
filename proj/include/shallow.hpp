#pragma once

#include "shallow/aggregate.hpp"
#include "shallow/backend.hpp"
#include "shallow/correlation.hpp"
#include "shallow/csv.hpp"
#include "shallow/double_metaphone.hpp"
#include "shallow/edit_distance.hpp"
#include "shallow/lexical.hpp"
#include "shallow/manifest.hpp"
#include "shallow/metaphone.hpp"
#include "shallow/morphological.hpp"
#include "shallow/phonetic.hpp"
#include "shallow/pipeline.hpp"
#include "shallow/protocol.hpp"
#include "shallow/record_io.hpp"
#include "shallow/reference_backend.hpp"
#include "shallow/remote_backend.hpp"
#include "shallow/report.hpp"
#include "shallow/score.hpp"
#include "shallow/semantic.hpp"
#include "shallow/string_distance.hpp"
#include "shallow/synthetic.hpp"
#include "shallow/text.hpp"
#include "shallow/weights.hpp"
