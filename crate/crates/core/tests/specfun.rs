use num_complex::Complex64 as C;
use proptest::prelude::*;
use thzbem::specfun::{
    bessel_j, bessel_j_orders, bessel_y, bessel_y_orders, hankel2, hankel2_orders,
};

// Reference values from a 40-digit arbitrary-precision evaluation.
// (n, re z, im z, J re, J im, Y re, Y im, H2 re, H2 im)
#[rustfmt::skip]
const TABLE: &[(u32, f64, f64, f64, f64, f64, f64, f64, f64)] = &[
    (0, 2.0, 0.0, 0.22389077914123566805, 0.0, 0.5103756726497451196, 0.0, 0.22389077914123566805, -0.5103756726497451196),
    (1, 2.0, 0.0, 0.5767248077568733872, 0.0, -0.10703243154093754689, 0.0, 0.5767248077568733872, 0.10703243154093754689),
    (2, 2.0, 0.0, 0.35283402861563771915, 0.0, -0.61740810419068266648, 0.0, 0.35283402861563771915, 0.61740810419068266648),
    (5, 2.0, 0.0, 0.0070396297558716854842, 0.0, -9.935989128481974981, 0.0, 0.0070396297558716854842, 9.935989128481974981),
    (17, 2.0, 0.0, 2.6593078051678733303e-15, 0.0, -7090388217294.8126836, 0.0, 2.6593078051678733303e-15, 7090388217294.8126836),
    (60, 2.0, 0.0, 1.1822372183209694299e-82, 0.0, -4.4898902537939941888e+79, 0.0, 1.1822372183209694299e-82, 4.4898902537939941888e+79),
    (0, 0.5, 0.0, 0.93846980724081290423, 0.0, -0.44451873350670655715, 0.0, 0.93846980724081290423, 0.44451873350670655715),
    (1, 0.5, 0.0, 0.24226845767487388638, 0.0, -1.4714723926702430692, 0.0, 0.24226845767487388638, 1.4714723926702430692),
    (2, 0.5, 0.0, 0.030604023458682641307, 0.0, -5.4413708371742657196, 0.0, 0.030604023458682641307, 5.4413708371742657196),
    (5, 0.5, 0.0, 8.053627241357474086e-6, 0.0, -7946.3014788074733418, 0.0, 8.053627241357474086e-6, 7946.3014788074733418),
    (17, 0.5, 0.0, 1.6308106069952961309e-25, 0.0, -1.1486461399290470778e+23, 0.0, 1.6308106069952961309e-25, 1.1486461399290470778e+23),
    (60, 0.5, 0.0, 9.0319327113893072797e-119, 0.0, -5.8739908800922680545e+115, 0.0, 9.0319327113893072797e-119, 5.8739908800922680545e+115),
    (0, 0.001, 0.0, 0.999999750000015625, 0.0, -4.4714166113759232557, 0.0, 0.999999750000015625, 4.4714166113759232557),
    (1, 0.001, 0.0, 0.00049999993750000261457, 0.0, -636.62216723113941482, 0.0, 0.00049999993750000261457, 636.62216723113941482),
    (2, 0.001, 0.0, 1.2499998958333366406e-7, 0.0, -1273239.8630456674272, 0.0, 1.2499998958333366406e-7, 1273239.8630456674272),
    (5, 0.001, 0.0, 2.6041665581597244309e-19, 0.0, -244462007868026383.74, 0.0, 2.6041665581597244309e-19, 244462007868026383.74),
    (17, 0.001, 0.0, 2.1449716303234135388e-71, 0.0, -8.7293047235648745546e+68, 0.0, 2.1449716303234135388e-71, 8.7293047235648745546e+68),
    (60, 0.001, 0.0, 1.0423784133801966982e-280, 0.0, -5.0894806553633742188e+277, 0.0, 1.0423784133801966982e-280, 5.0894806553633742188e+277),
    (0, 8.0, 0.0, 0.17165080713755390609, 0.0, 0.22352148938756622053, 0.0, 0.17165080713755390609, -0.22352148938756622053),
    (1, 8.0, 0.0, 0.23463634685391462438, 0.0, -0.15806046173124749426, 0.0, 0.23463634685391462438, 0.15806046173124749426),
    (2, 8.0, 0.0, -0.11299172042407525, 0.0, -0.26303660482037809409, 0.0, -0.11299172042407525, 0.26303660482037809409),
    (5, 8.0, 0.0, 0.18577477219056331234, 0.0, 0.25640106499011348229, 0.0, 0.18577477219056331234, -0.25640106499011348229),
    (17, 8.0, 0.0, 0.000019422232802661207874, 0.0, -1093.5565465439841815, 0.0, 0.000019422232802661207874, 1093.5565465439841815),
    (60, 8.0, 0.0, 1.2281997839902127279e-46, 0.0, -4.3583903016972974586e+43, 0.0, 1.2281997839902127279e-46, 4.3583903016972974586e+43),
    (200, 8.0, 0.0, 3.0236540866820501491e-255, 0.0, -5.2678784899053815251e+251, 0.0, 3.0236540866820501491e-255, 5.2678784899053815251e+251),
    (0, 12.5, 0.0, 0.14688405470042110231, 0.0, -0.17121430684466928735, 0.0, 0.14688405470042110231, 0.17121430684466928735),
    (1, 12.5, 0.0, -0.16548380461475971846, 0.0, -0.15383825653750118008, 0.0, -0.16548380461475971846, 0.15383825653750118008),
    (2, 12.5, 0.0, -0.17336146343878265726, 0.0, 0.14660018579866909854, 0.0, -0.17336146343878265726, -0.14660018579866909854),
    (5, 12.5, 0.0, 0.034737699762239727682, 0.0, -0.23290393783115078509, 0.0, 0.034737699762239727682, 0.23290393783115078509),
    (17, 12.5, 0.0, 0.0093932263551630288457, 0.0, -2.9820871660472987901, 0.0, 0.0093932263551630288457, 2.9820871660472987901),
    (60, 12.5, 0.0, 3.5732340669968687403e-35, 0.0, -1.5180143529996540903e+32, 0.0, 3.5732340669968687403e-35, 1.5180143529996540903e+32),
    (200, 12.5, 0.0, 1.565571984313837682e-216, 0.0, -1.0185843623976718416e+213, 0.0, 1.565571984313837682e-216, 1.0185843623976718416e+213),
    (0, 19.99, 0.0, 0.16768479902327925991, 0.0, 0.06098196181483830639, 0.0, 0.16768479902327925991, -0.06098196181483830639),
    (1, 19.99, 0.0, 0.065192578142166100121, 0.0, -0.16621268550210406335, 0.0, 0.065192578142166100121, 0.16621268550210406335),
    (2, 19.99, 0.0, -0.16116227994952577264, 0.0, -0.077611545156719654699, 0.0, -0.16116227994952577264, 0.077611545156719654699),
    (5, 19.99, 0.0, 0.15023367825707123454, 0.0, -0.101522454441068897, 0.0, 0.15023367825707123454, 0.101522454441068897),
    (17, 19.99, 0.0, 0.23362626174104050938, 0.0, 0.062411177218580784139, 0.0, 0.23362626174104050938, -0.062411177218580784139),
    (60, 19.99, 0.0, 2.2172303469099075847e-23, 0.0, -2.5377392161051682439e+20, 0.0, 2.2172303469099075847e-23, 2.5377392161051682439e+20),
    (200, 19.99, 0.0, 6.9751530115228462154e-176, 0.0, -2.2932249516477720357e+172, 0.0, 6.9751530115228462154e-176, 2.2932249516477720357e+172),
    (0, 20.01, 0.0, 0.16634816148968909858, 0.0, 0.064292140251674548874, 0.0, 0.16634816148968909858, -0.064292140251674548874),
    (1, 20.01, 0.0, 0.068466185258794458865, 0.0, -0.16479438815068465555, 0.0, 0.068466185258794458865, 0.16479438815068465555),
    (2, 20.01, 0.0, -0.1595049645622733611, 0.0, -0.080763343465136282275, 0.0, -0.1595049645622733611, 0.080763343465136282275),
    (5, 20.01, 0.0, 0.15209122126573455034, 0.0, -0.098540448560935420713, 0.0, 0.15209122126573455034, 0.098540448560935420713),
    (17, 20.01, 0.0, 0.23256716199044151415, 0.0, 0.064853147490004794699, 0.0, 0.23256716199044151415, -0.064853147490004794699),
    (60, 20.01, 0.0, 2.3464149876800550063e-23, 0.0, -2.3983209180402636074e+20, 0.0, 2.3464149876800550063e-23, 2.3983209180402636074e+20),
    (200, 20.01, 0.0, 8.5109774384992411074e-176, 0.0, -1.8794264959484506285e+172, 0.0, 8.5109774384992411074e-176, 1.8794264959484506285e+172),
    (0, 35.0, 0.0, -0.12684568275631256981, 0.0, 0.045797987195155641061, 0.0, -0.12684568275631256981, -0.045797987195155641061),
    (1, 35.0, 0.0, 0.04399094217962563997, 0.0, 0.12751273354559011719, 0.0, 0.04399094217962563997, -0.12751273354559011719),
    (2, 35.0, 0.0, 0.12935945088086260638, 0.0, -0.038511545278264777222, 0.0, 0.12935945088086260638, 0.038511545278264777222),
    (5, 35.0, 0.0, -0.0015053072953907044842, 0.0, 0.13554781474770029774, 0.0, -0.0015053072953907044842, -0.13554781474770029774),
    (17, 35.0, 0.0, 0.095691208839964123972, 0.0, -0.10790088012251564971, 0.0, 0.095691208839964123972, 0.10790088012251564971),
    (60, 35.0, 0.0, 2.4120888528943900682e-10, 0.0, -27083384.009222889987, 0.0, 2.4120888528943900682e-10, 27083384.009222889987),
    (200, 35.0, 0.0, 1.1130004375895714349e-127, 0.0, -1.4523760306334207271e+124, 0.0, 1.1130004375895714349e-127, 1.4523760306334207271e+124),
    (0, 150.0, 0.0, -0.00077409037539429124695, 0.0, -0.065142221509037354596, 0.0, -0.00077409037539429124695, 0.065142221509037354596),
    (1, 150.0, 0.0, -0.065145163657727360305, 0.0, 0.0005569563495608399837, 0.0, -0.065145163657727360305, -0.0005569563495608399837),
    (2, 150.0, 0.0, -0.000094511806708740223781, 0.0, 0.065149647593698165796, 0.0, -0.000094511806708740223781, -0.065149647593698165796),
    (5, 150.0, 0.0, -0.064998631740725846593, 0.0, -0.0046524973404176349096, 0.0, -0.064998631740725846593, 0.0046524973404176349096),
    (17, 150.0, 0.0, -0.037886444416347707574, 0.0, -0.053256411668853238376, 0.0, -0.037886444416347707574, 0.053256411668853238376),
    (60, 150.0, 0.0, -0.027145903685787337656, 0.0, -0.062399969604267460409, 0.0, -0.027145903685787337656, 0.062399969604267460409),
    (200, 150.0, 0.0, 8.0577021983968537965e-14, 0.0, -29864935180.406554224, 0.0, 8.0577021983968537965e-14, 29864935180.406554224),
    (0, 2500.0, 0.0, 0.0012370092569681498077, 0.0, -0.015909673533804860551, 0.0, 0.0012370092569681498077, 0.015909673533804860551),
    (1, 2500.0, 0.0, -0.015909426450156754118, 0.0, -0.0012401912162878124121, 0.0, -0.015909426450156754118, 0.0012401912162878124121),
    (2, 2500.0, 0.0, -0.001249736798128275211, 0.0, 0.015908681380831830301, 0.0, -0.001249736798128275211, -0.015908681380831830301),
    (5, 2500.0, 0.0, -0.015903305544487366968, 0.0, -0.0013165431667613872995, 0.0, -0.015903305544487366968, 0.0013165431667613872995),
    (17, 2500.0, 0.0, -0.015811828083298694948, 0.0, -0.0021540390387260398297, 0.0, -0.015811828083298694948, 0.0021540390387260398297),
    (60, 2500.0, 0.0, 0.011422615268191689233, 0.0, -0.011146530157953972641, 0.0, 0.011422615268191689233, 0.011146530157953972641),
    (200, 2500.0, 0.0, 0.015570086815680450716, 0.0, 0.0036109702070119833649, 0.0, 0.015570086815680450716, -0.0036109702070119833649),
    (0, 3.0, -1.0, -0.46049214388225845912, 0.36956500001486357806, 0.51587521960617029589, 0.38988679484040737612, -0.070605349041851082997, -0.14631021959130671784),
    (1, 3.0, -1.0, 0.43261563940523965424, 0.42950578688424357569, 0.52486105244696062587, -0.28797508675491897507, 0.14464055265032067917, -0.095355265562717050179),
    (2, 3.0, -1.0, 0.63416037014855353653, -0.025338400003269501796, -0.14336357078701012536, -0.457699636403966636, 0.17646073374458690053, 0.11802517078374062356),
    (5, 3.0, -1.0, 0.013112369826747121501, -0.057344623034556140402, -0.56373226336636388394, -1.1714764974454479131, -1.1583641276187007916, 0.50638764033180774354),
    (17, 3.0, -1.0, 3.7855051829315510576e-12, 4.7434965093530256314e-12, -1925238106.8361036622, 2466211932.9062196084, 2466211932.9062196084, 1925238106.8361036622),
    (60, 3.0, -1.0, 9.1655347290649874069e-71, -4.2132082132711555523e-71, -4.7856066082102565065e+67, -2.1950041941508013751e+67, -2.1950041941508013751e+67, 4.7856066082102565065e+67),
    (0, 10.0, -2.5, -1.5194420116086261145, 0.14757187888396964871, 0.15443052400215830178, 1.5003038715254560681, -0.019138140083170046313, -0.0068586451181886530693),
    (1, 10.0, -2.5, 0.080677481937708016855, 1.4910984924959764182, 1.5107985484023714502, -0.074620281656232565292, 0.0060572002814754515631, -0.019700055906395031999),
    (2, 10.0, -2.5, 1.4644590203265016744, 0.13690207179469452492, 0.13346662777505197428, -1.4432536399124000122, 0.02120538041410166223, 0.0034354440196425506489),
    (5, 10.0, -2.5, -1.0754323477269726549, 0.50141436263247786546, 0.52147727090785562163, 1.0542614051702800989, -0.021170942556692555946, -0.020062908275377756165),
    (17, 10.0, -2.5, -0.00091033834793488170413, 0.00025648657177500148142, 23.46162212608651765, 3.4817367079735030242, 3.4808263696255681425, -23.461365639514742649),
    (60, 10.0, -2.5, -1.5210245101332768333e-40, -4.0986464310886178377e-40, 4.1955615547251754627e+36, -1.1557662097639148412e+37, -1.1557662097639148412e+37, -4.1955615547251754627e+36),
    (200, 10.0, -2.5, 7.1333269029945337291e-234, 2.9298828511275092097e-233, -1.2467882009105189633e+229, 5.1349474364335662151e+229, 5.1349474364335662151e+229, 1.2467882009105189633e+229),
    (0, 25.0, -4.0, 2.8801169714308349895, -3.2351592430564016768, -3.2376046477073194986, -2.878554755636298018, 0.0015622157945369715074, 0.002445404650917821855),
    (1, 25.0, -4.0, -3.1718012524417336311, -2.9333728963779193949, -2.934987792365465242, 3.1693781334065857307, -0.0024231190351479003421, 0.0016148959875458470782),
    (2, 25.0, -4.0, -3.0909174073919322225, 2.9667613415923925679, 2.9691110210528328404, 3.0891460260441070111, -0.0017713813478252114352, -0.0023496794604402724772),
    (5, 25.0, -4.0, -1.394499696228850242, -3.7931718202828352736, -3.7959264689414234555, 1.3929338986721688051, -0.0015657975566814369466, 0.0027546486585881819103),
    (17, 25.0, -4.0, -1.6802261748302589306, -0.60278859159155822093, -0.60341863057306807401, 1.6710554132648397238, -0.0091707615654192067247, 0.00063003898150985308028),
    (60, 25.0, -4.0, -9.5367687057011899902e-18, -9.0806636492427244996e-18, 309398906309656.00669, -314963795468815.78698, -314963795468815.78698, -309398906309656.00669),
    (200, 25.0, -4.0, 1.7884248011757029051e-155, -1.1718412906676261722e-156, -8.930761231263385372e+151, -5.6241000513294238101e+150, -5.6241000513294238101e+150, 8.930761231263385372e+151),
    (0, 60.0, -10.0, -1040.2151346693233575, 433.82023868100920444, 433.82024114826424853, 1040.2151307362126414, -3.9331107160552216945e-6, -2.4672550440912614402e-6),
    (1, 60.0, -10.0, 424.80291367329076157, 1042.3649391150521715, 1042.3649430735790676, -424.80291123446852582, 2.4388222357491036059e-6, -3.9585268960233508124e-6),
    (2, 60.0, -10.0, 1048.3581213878352083, -397.71757625742215692, -397.71757860947536782, -1048.3581173542301122, 4.0336050961120755997e-6, 2.3520532108999587306e-6),
    (5, 60.0, -10.0, 208.01989295868131307, 1071.3055680726468728, 1071.3055725779722602, -208.01989127300455538, 1.6856767576896771952e-6, -4.5053253873159942056e-6),
    (17, 60.0, -10.0, -711.39029035873432025, -298.82925062910091247, -298.82925215900490765, 711.3902834812206442, -6.8775136760547458315e-6, 1.5299039951798624277e-6),
    (60, 60.0, -10.0, -1.1964247940342105851, -0.35265619009170869678, -0.3488426275840982776, 1.1901347713009200217, -0.0062900227332905633612, -0.0038135625076104191841),
    (200, 60.0, -10.0, 6.4071568957653551791e-81, -5.6343293491073965766e-82, -2.5831206345827797361e+77, -1.8443557721779172831e+76, -1.8443557721779172831e+76, 2.5831206345827797361e+77),
    (0, 1.5, 2.0, 0.84815518637806797329, -1.7490451570927801223, 1.763911091344391741, 0.7840288636940339751, 1.6321840500721019484, -3.5129562484371718634),
    (1, 1.5, 2.0, 1.6112538418514901538, 0.39820732199231417058, -0.47060676943050058777, 1.5873011077200248426, 3.1985549495715149964, 0.86881409142281475835),
    (2, 1.5, 2.0, 0.18009934378572836971, 0.90898221286413722579, -0.9739296317302161239, 0.2790640004470983255, 0.45916334423282669521, 1.8829118445943533497),
    (5, 1.5, 2.0, -0.0087216490746858446928, -0.026040731778152798167, 0.95663302081202342643, -2.009712009747318059, -2.0184336588220039037, -0.98267375259017622459),
    (17, 1.5, 2.0, -1.2789965911768763597e-13, 3.475958711749928736e-15, 145781707570.53366567, 5472553643.9389939059, 5472553643.9389939059, -145781707570.53366567),
    (60, 1.5, 2.0, 4.6868087498223362562e-77, -6.357638657040539937e-77, -3.9800966512361334325e+73, -5.4084148369786585874e+73, -5.4084148369786585874e+73, 3.9800966512361334325e+73),
    (0, -4.0, 1.0, -0.6001401561447452485, -0.093650759435658346818, 0.10462535536765062115, -0.74284802883479734658, -1.3429881849795425951, -0.19827611480330896797),
    (1, -4.0, 1.0, 0.15178847336327567856, -0.43202020755789205373, 0.28313198146900339158, 0.15661723020541093484, 0.3084057035686866134, -0.71515218902689544531),
    (2, -4.0, 1.0, 0.47788437955521645226, 0.27909691906722217462, -0.21943837838772151897, 0.63583615797707415471, 1.113720537532290607, 0.4985352974549436936),
    (5, -4.0, 1.0, -0.10659578856553475575, 0.12304907697654969554, 0.33124741076871513745, 0.14156535554495115268, 0.034969566979416396934, -0.20819833379216544191),
    (17, -4.0, 1.0, 3.0690592342629826046e-10, -3.9535849040309190342e-10, -23999630.916573594468, -29997986.757600254635, -29997986.757600254328, 23999630.916573594072),
    (60, -4.0, 1.0, -4.05130322554071791e-64, -6.9345881943917454761e-64, 3.3327212056425055452e+60, -5.7192417275576981849e+60, -5.7192417275576981849e+60, -3.3327212056425055452e+60),
    (0, -30.0, -2.0, -0.31033047080442523866, 0.43563719256090001948, 0.42018177352710568654, 0.32252358418337718959, 0.012193113378951950932, 0.015455419033794332939),
    (1, -30.0, -2.0, 0.45582617477789961621, 0.29060035651881612796, 0.27864819635317461988, -0.471502832670880846, -0.015676657892981229794, 0.01195216016564150808),
    (2, -30.0, -2.0, 0.27879067886554333436, -0.45290789686622896772, -0.43658982712279921951, -0.28999619176560556432, -0.011205512900062229964, -0.016318069743429748209),
    (5, -30.0, -2.0, 0.52749214544396010865, 0.094282955867984023593, 0.089173879968036880346, -0.5472231693809709094, -0.019731023937010800758, 0.0051090758999471432465),
    (17, -30.0, -2.0, -0.15714312519363034707, 0.37521618629174776148, 0.34781963840677993299, 0.17091883459820168268, 0.013775709404571335607, 0.027396547884967828487),
    (60, -30.0, -2.0, -1.0821820138759339489e-13, -3.6779885402378196004e-14, 51056804196.948231949, -16097526706.358493192, -16097526706.358493192, -51056804196.948231949),
    (200, -30.0, -2.0, 8.8330782742579181844e-141, 6.0064830604017536471e-141, -1.2474215569540852688e+137, 8.4544902860443445079e+136, 8.4544902860443445079e+136, 1.2474215569540852688e+137),
    (0, -0.7, -0.3, 0.89980708616509229904, -0.099805415000367081325, -0.33248091685462770946, -1.4811100765951188383, -0.58130299043002653926, 0.23267550185426062814),
    (1, -0.7, -0.3, -0.340090236913097986, -0.12472222069418016876, 0.73855588765163423151, 0.32185190281043411848, -0.018238334102663867526, -0.86327810834581440027),
    (2, -0.7, -0.3, 0.050123369170847897635, 0.049041564696907491041, -1.7831904355566627528, 1.4682495053130029492, 1.5183728744838508469, 1.8322320002535702438),
    (5, -0.7, -0.3, 0.000027717413204179279526, -0.000059473019075124895528, -405.34364048220450702, -890.42481439130301616, -890.42478667388981198, 405.34358100918543189),
    (17, -0.7, -0.3, -1.7238821011110182699e-22, -1.164600200277112029e-22, 74667363892090594098.0, -50363542353137882167.0, -50363542353137882167.0, -74667363892090594098.0),
    (60, -0.7, -0.3, 5.5477513804608683416e-108, -6.2011609977455726101e-108, -4.2511374778569220662e+104, -4.7523910448586532525e+104, -4.7523910448586532525e+104, 4.2511374778569220662e+104),
    (0, 0.0, -5.0, 27.239871823604446895, 0.0, -0.0023498261812045550885, -27.239871823604446895, 0.0, 0.0023498261812045550885),
    (1, 0.0, -5.0, 0.0, -24.335642142450527199, -24.335642142450527199, -0.0025748808909586156577, -0.0025748808909586156577, 0.0),
    (2, 0.0, -5.0, -17.505614966624236015, 0.0, 0.0033797785375880013516, 17.505614966624236015, 0.0, -0.0033797785375880013516),
    (5, 0.0, -5.0, 0.0, -2.1579745473225464669, -2.1579745473225464669, -0.020821460525545531041, -0.020821460525545531041, 0.0),
    (17, 0.0, -5.0, 0.0, -2.3086673707484397421e-8, -2.3086673707484397421e-8, -777990.5487232844264, -777990.5487232844264, -2.9866639201007291855e-144),
    (60, 0.0, -5.0, 1.0015816712993345441e-58, 0.0, -5.2784856318205130177e+55, -0.21134405503765592021, -2.0263822646774994997e-94, 5.2784856318205130177e+55),
    (0, 380.0, -68.0, -4.6657418117050077895e+27, 5.1005648970366403686e+27, 5.1005648970366403686e+27, 4.6657418117050077895e+27, -6.3747950387503945816e-32, -1.0081907073154102893e-31),
    (1, 380.0, -68.0, 5.0934552216705940848e+27, 4.6711854957363976243e+27, 4.6711854957363976243e+27, -5.0934552216705940848e+27, 1.0076089434817079414e-31, -6.3891055650992068204e-32),
    (2, 380.0, -68.0, 4.6874547219815370829e+27, -5.0720942420622277707e+27, -5.0720942420622277707e+27, -4.6874547219815370829e+27, 6.4320123079641753986e-32, 1.0058519081512888898e-31),
    (5, 380.0, -68.0, 4.9212554951814696615e+27, 4.7987334401057882443e+27, 4.7987334401057882443e+27, -4.9212554951814696615e+27, 9.9305961493164727099e-32, -6.7312619644898865782e-32),
    (17, 380.0, -68.0, 2.881270127371995268e+27, 5.7978588202900791563e+27, 5.7978588202900791563e+27, -2.881270127371995268e+27, 7.598563365425089485e-32, -1.0235168671659842237e-31),
    (60, 380.0, -68.0, 2.4614713067761034273e+27, 1.7895906067990513666e+27, 1.7895906067990513666e+27, -2.4614713067761034273e+27, 2.4710176329942282369e-31, -1.1853778498096813115e-31),
    (200, 380.0, -68.0, -2.2432724663633785155e+23, -3.4595162102341563033e+23, -3.4595162102341563033e+23, 2.2432724663633785155e+23, -1.6747579566886362894e-27, 1.5808742419116124417e-27),
    (0, 7.2, -0.9, 0.41890306016945430816, 0.060822893496168171339, 0.067130967823291749144, -0.29902629385570032065, 0.11987676631375398751, -0.0063080743271235778057),
    (1, 7.2, -0.9, 0.095455761078502758155, -0.29198422537922018042, -0.41271546430841760842, -0.080984862294837558385, 0.014470898783665199769, 0.12073123892919742799),
    (2, 7.2, -0.9, -0.38281313490424944595, -0.13741838211002316724, -0.17724169781209527836, 0.26276665752520055828, -0.12004647737904888767, 0.039823315702072111123),
    (5, 7.2, -0.9, 0.39161274569774015281, 0.11419797996188336926, 0.14747393664599300247, -0.22114415486541190628, 0.17046859083232824654, -0.033275956684109633201),
    (17, 7.2, -0.9, -1.5565320971852840416e-6, -4.1857764473025425506e-6, 1490.6707200645376439, -4372.4589575865021012, -4372.4589591430341984, -1490.6707242503140912),
    (60, 7.2, -0.9, 1.5989101528399868916e-49, -3.3442797211046734227e-49, -6.2412006618279027621e+45, -1.2993057877686000119e+46, -1.2993057877686000119e+46, 6.2412006618279027621e+45),
    (200, 7.2, -0.9, 9.8264073661173424587e-264, 2.8029447581562839356e-264, -1.4986837933313701442e+260, 4.2775666047908015794e+259, 4.2775666047908015794e+259, 1.4986837933313701442e+260),
];

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn j_and_y_match_reference_table() {
    let mut worst_j: f64 = 0.0;
    let mut worst_y: f64 = 0.0;
    for &(n, zr, zi, jr, ji, yr, yi, hr, hi) in TABLE {
        let z = C::new(zr, zi);
        let j = bessel_j(n, z).unwrap();
        let y = bessel_y(n, z).unwrap();
        let ej = rel(j, C::new(jr, ji));
        let ey = rel(y, C::new(yr, yi));
        assert!(ej < 1e-10, "J_{n}({z}) = {j}, rel err {ej:e}");
        assert!(ey < 1e-10, "Y_{n}({z}) = {y}, rel err {ey:e}");
        let h = hankel2(n, z).unwrap();
        let eh = rel(h, C::new(hr, hi));
        // below the real axis H2 is recessive and inherits the cancellation in J - jY
        let tol_h = if zi < 0.0 {
            1e-10f64.max(1e-15 * (2.0 * zi.abs()).exp())
        } else {
            1e-10
        };
        assert!(eh < tol_h, "H2_{n}({z}) rel err {eh:e}");
        worst_j = worst_j.max(ej);
        worst_y = worst_y.max(ey);
    }
    println!("worst relative error: J {worst_j:e}, Y {worst_y:e}");
}

#[test]
fn j0_of_two_matches_extended_series() {
    // sum_m (-1)^m / (m!)^2 in exact rational steps, accumulated in f64 pairs
    let mut term = 1.0f64;
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for m in 0..40 {
        if m > 0 {
            term *= -1.0 / ((m * m) as f64);
        }
        let s = hi + term;
        lo += (hi - s) + term;
        hi = s;
    }
    let j0 = bessel_j(0, C::new(2.0, 0.0)).unwrap();
    assert!((j0.re - (hi + lo)).abs() < 1e-10 * j0.re.abs());
    assert_eq!(j0.im, 0.0);
}

#[test]
fn hankel_large_argument_leading_term() {
    for &x in &[50.0, 200.0, 1000.0, 9000.0] {
        let z = C::new(x, 0.0);
        let lead = (2.0 / (std::f64::consts::PI * z)).sqrt()
            * (-C::i() * (z - std::f64::consts::FRAC_PI_4)).exp();
        assert!(rel(hankel2(0, z).unwrap(), lead) < 0.01);
    }
}

#[test]
fn real_axis_conjugacy() {
    for &x in &[0.3, 4.0, 17.0, 33.0] {
        let h = hankel2(0, C::new(x, 0.0)).unwrap();
        let j = bessel_j(0, C::new(x, 0.0)).unwrap();
        let y = bessel_y(0, C::new(x, 0.0)).unwrap();
        assert_eq!(j.im, 0.0);
        assert!(y.im.abs() < 1e-14 * y.norm());
        assert!((h.conj().im + h.im).abs() <= 2.0 * h.im.abs() + 1e-300);
        assert!((h.im + y.re).abs() < 1e-14 * y.re.abs().max(1e-300));
    }
}

#[test]
fn hankel_derivative_by_central_difference() {
    let d = 1e-5;
    for &z in &[
        C::new(1.3, 0.0),
        C::new(7.0, -0.6),
        C::new(24.0, -1.0),
        C::new(3.0, 0.4),
    ] {
        let fd = (hankel2(0, z + d).unwrap() - hankel2(0, z - d).unwrap()) / (2.0 * d);
        let h1 = hankel2(1, z).unwrap();
        assert!(rel(fd, -h1) < 1e-6, "z = {z}");
    }
}

fn arg_strategy() -> impl Strategy<Value = C> {
    (0.05f64..60.0, -3.1f64..3.1, 0.0f64..1.0).prop_map(|(r, t, damp)| {
        let z = C::from_polar(r, t);
        // keep |Im z| moderate so that cancellation in J - jY stays benign
        C::new(z.re, z.im * (0.2 + 0.8 * damp).min(8.0 / r.max(1.0)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wronskian_j1y0_minus_j0y1(z in arg_strategy()) {
        let j = bessel_j_orders(1, z).unwrap();
        let y = bessel_y_orders(1, z).unwrap();
        let w = j[1] * y[0] - j[0] * y[1];
        let target = 2.0 / (std::f64::consts::PI * z);
        let scale = (j[1] * y[0]).norm().max((j[0] * y[1]).norm()).max(target.norm());
        prop_assert!((w - target).norm() < 1e-10 * scale, "z = {}, w = {}", z, w);
    }

    #[test]
    fn three_term_recurrence(z in arg_strategy(), n in 1u32..40) {
        let j = bessel_j_orders(n + 1, z).unwrap();
        let y = bessel_y_orders(n + 1, z).unwrap();
        let k = n as usize;
        let f = 2.0 * n as f64 / z;
        let rj = j[k - 1] + j[k + 1] - f * j[k];
        let ry = y[k - 1] + y[k + 1] - f * y[k];
        let sj = j[k - 1].norm().max(j[k + 1].norm()).max((f * j[k]).norm());
        let sy = y[k - 1].norm().max(y[k + 1].norm()).max((f * y[k]).norm());
        prop_assert!(rj.norm() <= 1e-9 * sj);
        prop_assert!(ry.norm() <= 1e-9 * sy);
    }

    #[test]
    fn hankel_is_j_minus_jy(z in arg_strategy().prop_map(|z| C::new(z.re, z.im.clamp(-4.0, 4.0))), n in 0u32..30) {
        let h = hankel2_orders(n, z).unwrap()[n as usize];
        let j = bessel_j(n, z).unwrap();
        let y = bessel_y(n, z).unwrap();
        let scale = j.norm().max(y.norm());
        prop_assert!((h - (j - C::i() * y)).norm() < 1e-10 * scale);
    }
}
