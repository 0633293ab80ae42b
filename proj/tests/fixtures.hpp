#pragma once

// Shared test fixture: a real hub-centred context graph with query source
// 3390 at time 2677935, whose most recent outgoing interaction is with 8929.

#include <vector>

#include "tgcast/types.hpp"

namespace tgcast::testing {

inline const std::vector<Interaction>& hub_context_links() {
    static const std::vector<Interaction> links{
    {3390, 8648, 833529},
    {3390, 8648, 927657},
    {4272, 8929, 1027429},
    {4272, 8929, 1027461},
    {104, 8648, 1093360},
    {3390, 8648, 1103097},
    {3390, 8648, 1103671},
    {167, 8648, 1266808},
    {167, 8648, 1266809},
    {866, 8648, 1278569},
    {4459, 8648, 1335789},
    {4459, 8648, 1335874},
    {3390, 8929, 1344764},
    {3390, 8648, 1344818},
    {3390, 8648, 1344868},
    {4459, 8648, 1353699},
    {4459, 8648, 1353719},
    {866, 8648, 1389561},
    {866, 8648, 1390132},
    {866, 8648, 1420514},
    {997, 8929, 1444089},
    {997, 8929, 1444395},
    {997, 8929, 1446670},
    {997, 8929, 1446795},
    {997, 8929, 1450527},
    {423, 8648, 1451994},
    {3390, 8929, 1461814},
    {3390, 8648, 1463750},
    {859, 8648, 1504113},
    {866, 8648, 1517985},
    {866, 8648, 1518071},
    {866, 8648, 1518498},
    {866, 8648, 1519023},
    {997, 8929, 1522620},
    {2727, 8648, 1524334},
    {866, 8648, 1525088},
    {866, 8648, 1525235},
    {5522, 8929, 1525556},
    {2863, 8929, 1533240},
    {997, 8929, 1534720},
    {2863, 8929, 1535928},
    {2863, 8929, 1535943},
    {4531, 8929, 1536373},
    {3390, 8929, 1547848},
    {3390, 8648, 1549002},
    {233, 8648, 1575061},
    {4459, 8648, 1590422},
    {4459, 8648, 1593828},
    {611, 8648, 1596720},
    {5937, 8648, 1606417},
    {5937, 8648, 1606438},
    {5937, 8648, 1606461},
    {5938, 8648, 1607964},
    {5938, 8648, 1608194},
    {3390, 8648, 1620262},
    {997, 8929, 1620278},
    {997, 8929, 1620574},
    {997, 8929, 1620852},
    {997, 8929, 1621381},
    {997, 8929, 1622753},
    {997, 8929, 1622892},
    {5522, 8929, 1624366},
    {5522, 8929, 1624414},
    {997, 8929, 1624661},
    {997, 8929, 1628002},
    {997, 8929, 1657475},
    {3390, 8929, 1691346},
    {997, 8929, 1695077},
    {997, 8929, 1695521},
    {3390, 8929, 1696857},
    {6942, 8929, 2061590},
    {997, 8929, 2062009},
    {997, 8929, 2133359},
    {997, 8929, 2133419},
    {5522, 8929, 2218607},
    {7458, 8929, 2262998},
    {7458, 8929, 2264131},
    {7458, 8929, 2264356},
    {7458, 8929, 2264753},
    {7458, 8929, 2265033},
    {997, 8929, 2283892},
    {997, 8929, 2283988},
    {3390, 8929, 2289548},
    {8173, 8929, 2646640},
    {8173, 8929, 2646702},
    {997, 8929, 2648320},
    {5522, 8929, 2656128},
    {997, 8929, 2656490},
    {8192, 8929, 2659851},
    {8192, 8929, 2659898},
    {8192, 8929, 2660147},
    {8192, 8929, 2660185},
    {17, 8929, 2660187},
    {997, 8929, 2663130},
    {997, 8929, 2663161},
    {8199, 8929, 2664402},
    {3390, 8929, 2677842},
    };
    return links;
}

inline constexpr NodeId kHubQuerySource = 3390;
inline constexpr Timestamp kHubQueryTime = 2677935;
inline constexpr NodeId kHubExpectedPrediction = 8929;

}  // namespace tgcast::testing
