#pragma once

#include "episodic/bench.hpp"
#include "episodic/datagen.hpp"
#include "episodic/fsm.hpp"
#include "episodic/grammar.hpp"
#include "episodic/index.hpp"
#include "episodic/io.hpp"
#include "episodic/mapconcat.hpp"
#include "episodic/miner.hpp"
#include "episodic/oracle.hpp"
#include "episodic/parallel.hpp"
#include "episodic/tracking.hpp"
#include "episodic/types.hpp"
