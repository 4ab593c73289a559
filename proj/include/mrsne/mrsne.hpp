#ifndef MRSNE_MRSNE_HPP
#define MRSNE_MRSNE_HPP

#include "mrsne/cdmca.hpp"
#include "mrsne/embedder.hpp"
#include "mrsne/io.hpp"
#include "mrsne/metrics.hpp"
#include "mrsne/pipeline.hpp"
#include "mrsne/relation.hpp"
#include "mrsne/sn_graph.hpp"
#include "mrsne/types.hpp"

#endif // MRSNE_MRSNE_HPP
