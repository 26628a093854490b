#pragma once

#include "vulncast/cve_id.hpp"
#include "vulncast/errors.hpp"
#include "vulncast/eval/interval.hpp"
#include "vulncast/eval/metrics.hpp"
#include "vulncast/eval/retrocast.hpp"
#include "vulncast/forecast/baselines.hpp"
#include "vulncast/forecast/croston.hpp"
#include "vulncast/forecast/little.hpp"
#include "vulncast/forecast/matrix.hpp"
#include "vulncast/forecast/mvue.hpp"
#include "vulncast/forecast/registry.hpp"
#include "vulncast/forecast/result.hpp"
#include "vulncast/forecast/ridge.hpp"
#include "vulncast/io/build.hpp"
#include "vulncast/io/digest.hpp"
#include "vulncast/io/file.hpp"
#include "vulncast/io/mitre.hpp"
#include "vulncast/io/nvd.hpp"
#include "vulncast/io/snapshot_jsonl.hpp"
#include "vulncast/record.hpp"
#include "vulncast/series/count_series.hpp"
#include "vulncast/series/features.hpp"
#include "vulncast/snapshot.hpp"
#include "vulncast/subgroup/filter.hpp"
#include "vulncast/subgroup/pipeline.hpp"
#include "vulncast/survival/heatmap.hpp"
#include "vulncast/survival/kaplan_meier.hpp"
#include "vulncast/survival/ks.hpp"
#include "vulncast/survival/lags.hpp"
#include "vulncast/survival/probability.hpp"
#include "vulncast/synth/generator.hpp"
#include "vulncast/time.hpp"
