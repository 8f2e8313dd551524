// Generated by tests/oracle/gen_oracle.py; do not edit by hand.
#pragma once
#include <cstddef>
namespace oracle {
inline constexpr std::size_t kGridAlphaCount = 5;
inline constexpr std::size_t kGridZCount = 40;
inline constexpr double kGridAlpha[] = {
    0.3, 0.5, 0.7, 0.9,
    1.0,
};
inline constexpr double kGridZ[] = {
    -0.0, -0.7692307692307693, -1.5384615384615385, -2.3076923076923075,
    -3.076923076923077, -3.8461538461538463, -4.615384615384615, -5.384615384615385,
    -6.153846153846154, -6.923076923076923, -7.6923076923076925, -8.461538461538462,
    -9.23076923076923, -10.0, -10.76923076923077, -11.538461538461538,
    -12.307692307692308, -13.076923076923077, -13.846153846153847, -14.615384615384615,
    -15.384615384615385, -16.153846153846153, -16.923076923076923, -17.692307692307693,
    -18.46153846153846, -19.23076923076923, -20.0, -20.76923076923077,
    -21.53846153846154, -22.307692307692307, -23.076923076923077, -23.846153846153847,
    -24.615384615384617, -25.384615384615383, -26.153846153846153, -26.923076923076923,
    -27.692307692307693, -28.46153846153846, -29.23076923076923, -30.0,
};
// E_alpha(z), row-major over (alpha, z)
inline constexpr double kGridMlOne[] = {
    1.0, 0.5245318751260593, 0.3493770859380843, 0.2606398901668821,
    0.2074706515500785, 0.17217749249975156, 0.1470845970466499, 0.12834513879086681,
    0.11382492109057182, 0.10224696973402994, 0.09280128910838875, 0.08494965795866397,
    0.07832064367147731, 0.07264972907277209, 0.06774347291502418, 0.06345716601517384,
    0.05968040974156489, 0.056327525292927415, 0.05333100716071685, 0.05063695090719115,
    0.04820179429580771, 0.04598995201129937, 0.04397207075682228, 0.04212372294040441,
    0.040424415567546626, 0.03885682907565633, 0.03740622621388445, 0.03605998825651203,
    0.034807247669934316, 0.033638594622462346, 0.03254584058563555, 0.03152182648104718,
    0.030560265880773863, 0.029655616012113282, 0.02880297098110798, 0.027997972875607603,
    0.027236737350617993, 0.026515791016751437, 0.025832018504340318, 0.025182617502927662,
    1.0, 0.4999457515482611, 0.315403031995417, 0.22608667924329262,
    0.17491066308497755, 0.14216456845950962, 0.1195533761075978, 0.10305744254087582,
    0.09051537715619166, 0.08066920861583486, 0.07273996731587049, 0.06622074455416728,
    0.06076801537207783, 0.05614099274382259, 0.05216603194780939, 0.04871482838556123,
    0.04569056866043455, 0.04301885257760763, 0.040641577039475324, 0.038512714864282906,
    0.03659533850573878, 0.03485948114546394, 0.033280573045125154, 0.031838280663085944,
    0.03051563264599285, 0.029298353362985346, 0.02817434874105132, 0.027133305330538482,
    0.026166374568438296, 0.025265921860083133, 0.02442532548205655, 0.023638814144598296,
    0.0229013348187833, 0.0222084444528271, 0.021556220690942193, 0.02094118781734144,
    0.020360254981912112, 0.01981066439657851, 0.019289947675051003, 0.01879588886141675,
    1.0, 0.47917663550193257, 0.2771896297662298, 0.18386532685675788,
    0.1340517172500915, 0.10427966132232089, 0.08488066162157827, 0.07138266923749578,
    0.06150556765848714, 0.05398900189234991, 0.0480882693388387, 0.04333841990301586,
    0.039435555083749275, 0.03617326554230916, 0.0334067284334477, 0.031031474697968898,
    0.028970323049877112, 0.027165056665311747, 0.025570958156400463, 0.024153124353196324,
    0.022883921884164746, 0.02174119305832966, 0.020706966732218873, 0.01976651617510453,
    0.018907659882027306, 0.018120235400645456, 0.01739569829160398, 0.01672681288325093,
    0.016107411244704276, 0.01553220346654095, 0.014996626959092662, 0.014496725727404644,
    0.014029052896730438, 0.013590591431897479, 0.013178689211673691, 0.012791005517070995,
    0.012425466661023829, 0.012080228989300482, 0.011753647863419849, 0.011444251527526973,
    1.0, 0.4657721737789007, 0.23544937588961604, 0.1308088136443084,
    0.08023626977211462, 0.05401783391715469, 0.03936241560243331, 0.030527995346167437,
    0.02481291483966215, 0.020879014681413167, 0.01802647155872545, 0.015868479199702197,
    0.014179366042913037, 0.0128206060511021, 0.011703145162938092, 0.010767340351830018,
    0.009971795898445122, 0.009286882857355103, 0.008690825471477544, 0.008167250493641885,
    0.0077036014221806975, 0.007290081813317277, 0.006918932477537677, 0.006583925417228379,
    0.006280002093199725, 0.006003010029318146, 0.005749507816109113, 0.0055166185819758035,
    0.005301918390542703, 0.0051033501923588645, 0.004919156734930421, 0.004747827716828196,
    0.004588057768839746, 0.004438712753216835, 0.004298802516784538, 0.004167458697414079,
    0.0040439165209681036, 0.003927499774375047, 0.0038176083253864987, 0.003713707698459852,
    1.0, 0.4633693692311753, 0.21471117234169726, 0.09949058049485845,
    0.04610088752834602, 0.02136173917500705, 0.00989837560720391, 0.004586604061523324,
    0.0021252918309012095, 0.0009847951351168631, 0.000456323900581031, 0.00021144651797734188,
    9.797783966128938e-05, 4.5399929762484854e-05, 2.103693681718225e-05, 9.747872143533838e-06,
    4.516865366495415e-06, 2.092977055775124e-06, 9.69821458149841e-07, 4.493855573297509e-07,
    2.0823150224148666e-07, 9.648809984769783e-08, 4.470962996474237e-08, 2.071707303532191e-08,
    9.599657064693329e-09, 4.44818703890254e-09, 2.061153622438558e-09, 9.550754539179058e-10,
    4.4255271065011807e-10, 2.050653703854926e-10, 9.502101132668297e-11, 4.402982608215342e-11,
    2.040207273904576e-11, 9.453695576100218e-12, 4.380552956001107e-12, 2.0298140601059916e-12,
    9.405536606878835e-13, 4.3582375648101866e-13, 2.019473791365708e-13, 9.357622968840175e-14,
};
// E_{alpha,alpha+1}(z), row-major over (alpha, z)
inline constexpr double kGridMlTwo[] = {
    1.1142425085473018, 0.618108562336123, 0.4229048941402452, 0.32038938092768443,
    0.2575720382462245, 0.2152338519500646, 0.1847983373065592, 0.16187875993883902,
    0.14400345032278208, 0.12967543770508455, 0.11793583241590946, 0.10814231315033972,
    0.09984859693558996, 0.09273502709272279, 0.08656667751503347, 0.08116704561201826,
    0.07640096670849784, 0.07216318924230555, 0.068370538371726, 0.06495641914845535,
    0.0618668833707725, 0.05905776487549099, 0.05649255945527868, 0.05414083305119453,
    0.05197701082342456, 0.049979444888065876, 0.048129688689305776, 0.046411926491353124,
    0.0448125206438959, 0.043319649206579276, 0.04192301357462246, 0.04061360082498834,
    0.03938348919859356, 0.03822568785406827, 0.03713400405072234, 0.03610293243604886,
    0.03512756226233879, 0.034203499234546575, 0.03332679936695678, 0.03249391274990241,
    1.1283791670955126, 0.6500705229872605, 0.4449880292029789, 0.33536243899457324,
    0.2681540344973823, 0.2230372122005275, 0.19076343517668717, 0.1665750463852659,
    0.14779125121211883, 0.13279222542215718, 0.12054380424893683, 0.11035573018905295,
    0.1017501316680249, 0.09438590072561774, 0.08801315417627484, 0.08244471487325136,
    0.0775376412963397, 0.07318091127347706, 0.06928699721381566, 0.06578597214086486,
    0.06262130299712698, 0.05974679402432843, 0.05712432977460624, 0.05472218413643427,
    0.052513736565008726, 0.050476485625124766, 0.04859128256294743, 0.04684172974334444,
    0.04521370403789393, 0.04369497591661697, 0.04227490256244422, 0.040944178761678135,
    0.039694633272986925, 0.03851906127913106, 0.037411085679463975, 0.03636504159535589,
    0.03537587968120873, 0.034439084764444544, 0.03355060705322194, 0.03270680370461944,
    1.1005474055236657, 0.6770703738474876, 0.46982674065195057, 0.3536583583620716,
    0.28143319189372024, 0.23288728805619657, 0.19827585664865807, 0.17245750428446505,
    0.15250534525549583, 0.1366460330599939, 0.12374852498595096, 0.11306000492055267,
    0.1040611481992605, 0.09638267344576909, 0.08975508950260842, 0.08397727219284269,
    0.07889616125219748, 0.07439326037265263, 0.07037543079981552, 0.06676847043899183,
    0.06351254507752929, 0.060558878524960544, 0.05786731560218707, 0.055404501259668004,
    0.053142501756390195, 0.05105774775916644, 0.0491302150854198, 0.04734278308339903,
    0.0456807273350673, 0.044131315017017135, 0.04268347949843932, 0.04132755666304432,
    0.04005506972607032, 0.03885855245874344, 0.03773140305955365, 0.036667762652223074,
    0.03566241370390747, 0.03471069465713269, 0.033808427836251424, 0.032951858282415765,
    1.0397541343476364, 0.6944961740874291, 0.4969579056717495, 0.3766495140874664,
    0.2989232123240627, 0.24595536318153977, 0.20813814328613947, 0.18004480086428318,
    0.1584679013385549, 0.14142858676824033, 0.1276565586973657, 0.11630645245821701,
    0.1067972353453511, 0.09871793939488979, 0.09177042223487003, 0.08573349716950807,
    0.08043979158325133, 0.07576041484031991, 0.07159455149372662, 0.06786224075569819,
    0.06449926590755825, 0.06145347112584226, 0.05868206308087277, 0.05614960421554796,
    0.053826499886618355, 0.05168784347847546, 0.04971252460919454, 0.04788253317938635,
    0.04618241093186766, 0.044598815336204606, 0.04312016987481968, 0.04173638141832656,
    0.04043861015314088, 0.039219081012752066, 0.03807092813906412, 0.03698806581981033,
    0.03596508079229837, 0.034997141899819256, 0.034079923925710465, 0.03320954307671801,
    1.0, 0.6976198199994721, 0.5104377379778967, 0.39022074845222804,
    0.31001721155328754, 0.25444594781449814, 0.21452201861843917, 0.18486248781714565,
    0.16215464007747854, 0.14430219625826088, 0.12994067789292446, 0.1181568290478754,
    0.10832271906737004, 0.09999546000702375, 0.09285518942729554, 0.08666582185108089,
    0.08124963300468897, 0.0764704281841075, 0.07222215217956135, 0.06842102188414607,
    0.06499998646495235, 0.06190475593168906, 0.05909090644897641, 0.056521737959469784,
    0.05416666614668525, 0.05199999976869427, 0.04999999989694232, 0.04814814810216303,
    0.04642857140802434, 0.04482758619770397, 0.043333333329215754, 0.041935483869121326,
    0.040624999999171164, 0.03939393939356698, 0.03823529411747957, 0.037142857142781746,
    0.03611111111107714, 0.03513513513511982, 0.034210526315782565, 0.03333333333333022,
};
inline constexpr double kMlHalfMinusOne = 0.427583576155807;
inline constexpr double kMlTwoHalfThreeHalvesMinusTwo = 0.3723021618447471;
inline constexpr double kMlTwoHalfThreeHalvesMinusOne = 0.572416423844193;
inline constexpr double kGamma7p3 = 1271.4236336639087;
inline constexpr double kMlHalfMinusHundredth = 0.9888154610463425;
inline constexpr double kBranchResponse = 0.030140713022127615;
inline constexpr double kRelaxPolarization = 0.07167000358424387;
inline constexpr double kGlWeights07[] = {
    1.0, -0.7, -0.10500000000000001, -0.045500000000000006,
    -0.026162500000000005, -0.01726725, -0.012374862500000002, -0.009369538750000002,
    -0.007378511765625002, -0.0059847928765625015, -0.004967378087546876, -0.004199692383107813,
    -0.0036047359621675396, -0.0031333474132687078, -0.002752869513086079, -0.0024408776349363233,
    -0.002181534386224339, -0.001963380947601905, -0.0017779505247728362, -0.001618870740977372,
    -0.0014812667279942955, -0.0013613546595376144, -0.0012561590722097078, -0.0011633125320898597,
    -0.0010809112277334948, -0.001007409264247617, -0.0009415401969698882, -0.0008822580364199323,
    -0.0008286923699230079, -0.0007801138516861419, -0.0007359074000905938, -0.0006955511878275613,
    -0.0006586000309742221, -0.0006246721505907015, -0.0005934385430611665, -0.0005646143852553384,
    -0.0005379520392849474, -0.0005132353239664498, -0.0004902747963153192, -0.00046890384365542065,
    -0.0004489754303000653, -0.0004303593758729894, -0.00041294006780193983, -0.0003966145302376771,
    -0.0003812907870239487, -0.0003668864684030439, -0.00035332762065771404, -0.00034054768544243503,
    -0.0003284866215830155, -0.0003170901469566659, -0.0003063090819601393, -0.00029609877922813466,
    -0.0002864186268302918, -0.00027723161427158435, -0.00026850395234081224, -0.00026020473926845986,
    -0.0002523056668263816, -0.00024478076097366494, -0.0002376061524623679, -0.0002307598734931132,
    -0.000224221677077475, -0.00021797287624088964, -0.00021199620060202655, -0.000206275668204829,
    -0.00020079647076813822,
};
// u_1, u_2 after each of 10 steps; branches (1 mOhm, 20, 0.7), (2 mOhm, 400, 0.9)
inline constexpr double kTwoBranchTrajectory[] = {
    0.0026535168454376564, 0.0002595661054111537, 0.0051662106578948845, 0.0005184584651915243,
    0.007545554963176468, 0.0007766788281564059, 0.009798626664554834, 0.001034228938581761,
    0.011932127091661474, 0.0012911105362160029, 0.013952401932306596, 0.0015473253562917476,
    0.015865460106510403, 0.0018028751295375357, 0.017676991638883168, 0.0020577615821895227,
    0.019392384582512082, 0.00231198643600314, 0.021016741044691714, 0.002565551408264726,
};
// U_1..U_50 of the GL recurrence (alpha 0.8, tau 120, R 1 mOhm, 30 A, N 64)
inline constexpr double kGlTrajectory[] = {
    0.00025, 0.00044791666666666667, 0.0006246006944444444, 0.0007883088831018519,
    0.000942779254677855, 0.0010901181761570056, 0.001231667952980006, 0.001368354644916238,
    0.0015008536774645915, 0.001629678386276886, 0.0017552315006180233, 0.0018778370484949071,
    0.001997761146181995, 0.0021152261056206624, 0.0022304203336079285, 0.002343505476397366,
    0.002454621701440864, 0.002563891683659829, 0.002671423668775134, 0.002777313865048774,
    0.002881648337136004, 0.00298450452465046, 0.003085952473626294, 0.0031860558453869004,
    0.0032848727507363605, 0.0033824564455601164, 0.0034788559153567673, 0.0035741163699342235,
    0.003668279664825975, 0.003761384662462669, 0.0038534675434552077, 0.0039445620762862755,
    0.004034699852109248, 0.004123910490102621, 0.004212221817840907, 0.004299660030357935,
    0.004386249830949674, 0.004472014556256649, 0.004556976287754569, 0.0046411559514458476,
    0.004724573407268947, 0.004807247529514853, 0.0048891962793511596, 0.004970436770396873,
    0.005050985328159236, 0.005130857544033048, 0.005210068324469381, 0.005288631935841207,
    0.005366562045465964, 0.005443871759187397,
};
}  // namespace oracle
